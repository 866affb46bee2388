#pragma once

// Slow, independent reference implementations. None of these call into the
// library except to convert values at the boundary.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "laurentcf/gfpoly.hpp"

namespace oracle {

// Dense polynomial over F_q, coefficients low to high, no trailing zeros.
struct NPoly {
  int q = 2;
  std::vector<int> c;

  int deg() const { return c.empty() ? -1 : static_cast<int>(c.size()) - 1; }
  bool zero() const { return c.empty(); }
  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool operator==(const NPoly& o) const { return q == o.q && c == o.c; }
};

inline int inv_mod(int a, int q) {
  for (int x = 1; x < q; ++x) {
    if (a * x % q == 1) return x;
  }
  return 0;
}

inline NPoly make(int q, std::vector<int> c) {
  NPoly p{q, std::move(c)};
  for (int& v : p.c) v = ((v % q) + q) % q;
  p.trim();
  return p;
}

inline NPoly add(const NPoly& a, const NPoly& b, int sign = 1) {
  NPoly r{a.q, std::vector<int>(std::max(a.c.size(), b.c.size()), 0)};
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = ((r.c[i] + sign * b.c[i]) % a.q + a.q) % a.q;
  r.trim();
  return r;
}

inline NPoly sub(const NPoly& a, const NPoly& b) { return add(a, b, -1); }

inline NPoly mul(const NPoly& a, const NPoly& b) {
  if (a.zero() || b.zero()) return {a.q, {}};
  NPoly r{a.q, std::vector<int>(a.c.size() + b.c.size() - 1, 0)};
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = (r.c[i + j] + a.c[i] * b.c[j]) % a.q;
  }
  r.trim();
  return r;
}

inline std::pair<NPoly, NPoly> divmod(const NPoly& a, const NPoly& b) {
  NPoly r = a;
  NPoly quo{a.q, {}};
  if (r.deg() >= b.deg()) quo.c.assign(static_cast<std::size_t>(r.deg() - b.deg() + 1), 0);
  const int li = inv_mod(b.c.back(), a.q);
  while (!r.zero() && r.deg() >= b.deg()) {
    const int shift = r.deg() - b.deg();
    const int f = r.c.back() * li % a.q;
    quo.c[static_cast<std::size_t>(shift)] = f;
    for (std::size_t i = 0; i < b.c.size(); ++i) {
      auto& slot = r.c[i + static_cast<std::size_t>(shift)];
      slot = ((slot - f * b.c[i]) % a.q + a.q) % a.q;
    }
    r.trim();
  }
  quo.trim();
  return {quo, r};
}

inline NPoly monic(NPoly a) {
  if (a.zero()) return a;
  const int li = inv_mod(a.c.back(), a.q);
  for (int& v : a.c) v = v * li % a.q;
  return a;
}

inline NPoly gcd(NPoly a, NPoly b) {
  while (!b.zero()) {
    NPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

inline NPoly from_lcf(const lcf::Poly& p) {
  NPoly r{static_cast<int>(p.field().q()), {}};
  for (lcf::Degree i = 0; i <= p.degree(); ++i) r.c.push_back(static_cast<int>(p.coeff(i)));
  r.trim();
  return r;
}

inline lcf::Poly to_lcf(const NPoly& p) {
  std::vector<std::uint32_t> c(p.c.begin(), p.c.end());
  return lcf::Poly::from_coefficients(lcf::PrimeField(static_cast<std::uint32_t>(p.q)), c);
}

inline NPoly random_poly(std::mt19937_64& rng, int q, int deg, bool allow_lower = false) {
  NPoly p{q, std::vector<int>(static_cast<std::size_t>(deg) + 1)};
  for (int& v : p.c) v = static_cast<int>(rng() % static_cast<unsigned>(q));
  if (!allow_lower && p.c.back() == 0) p.c.back() = 1 + static_cast<int>(rng() % static_cast<unsigned>(q - 1));
  p.trim();
  return p;
}

// All monic polynomials of degree d, low digit first as a base-q counter.
inline std::vector<NPoly> monic_of_degree(int q, int d) {
  std::vector<NPoly> out;
  std::vector<int> digits(static_cast<std::size_t>(d), 0);
  while (true) {
    NPoly p{q, digits};
    p.c.push_back(1);
    out.push_back(p);
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == q) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  return out;
}

inline std::vector<int> key(const NPoly& p) { return p.c; }

// Monic irreducibles of degree d: every monic of degree d that is not a
// product of two monics of positive degree.
inline std::int64_t monic_irreducible_sieve(int q, int d) {
  std::set<std::vector<int>> composite;
  for (int a = 1; a <= d / 2; ++a) {
    const auto left = monic_of_degree(q, a);
    const auto right = monic_of_degree(q, d - a);
    for (const auto& x : left) {
      for (const auto& y : right) composite.insert(key(mul(x, y)));
    }
  }
  std::int64_t total = 1;
  for (int i = 0; i < d; ++i) total *= q;
  return total - static_cast<std::int64_t>(composite.size());
}

// Continued fraction digits of num/den (deg num < deg den) by Euclid.
inline std::vector<NPoly> cf_digits(NPoly num, NPoly den) {
  std::vector<NPoly> out;
  while (!num.zero()) {
    auto [a, r] = divmod(den, num);
    out.push_back(a);
    den = std::move(num);
    num = std::move(r);
  }
  return out;
}

// Coefficients of X^-1 .. X^-n of num/den for deg num < deg den.
inline std::vector<int> series_digits(const NPoly& num, const NPoly& den, int n) {
  std::vector<int> out;
  NPoly r = num;
  const int li = inv_mod(den.c.back(), num.q);
  for (int i = 1; i <= n; ++i) {
    // r <- X r; the next coefficient is the quotient digit.
    r.c.insert(r.c.begin(), 0);
    r.trim();
    int digit = 0;
    if (r.deg() == den.deg()) {
      digit = r.c.back() * li % num.q;
      NPoly t = den;
      for (int& v : t.c) v = v * digit % num.q;
      r = sub(r, t);
    }
    out.push_back(digit);
  }
  return out;
}

// P = union over k >= 2 of {k! + i k : 0 <= i < k!}, listed by scanning.
inline std::vector<std::int64_t> P_upto(std::int64_t T) {
  std::vector<std::int64_t> out;
  std::int64_t f = 1;
  for (std::int64_t k = 2;; ++k) {
    f *= k;
    if (f > T) break;
    for (std::int64_t i = 0; i < f; ++i) {
      const std::int64_t v = f + i * k;
      if (v > T) break;
      out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// count_P by summing per-k block sizes with fresh factorials.
inline mpz_class count_P_blocks(const mpz_class& T) {
  mpz_class total = 0;
  mpz_class f = 1;
  for (unsigned long k = 2;; ++k) {
    f *= k;
    if (f > T) break;
    mpz_class in_block = (T - f) / k + 1;
    if (in_block > f) in_block = f;
    total += in_block;
  }
  return total;
}

inline std::optional<std::pair<std::int64_t, std::int64_t>> ap_bruteforce(const std::vector<std::int64_t>& s,
                                                                          std::int64_t L) {
  std::set<std::int64_t> set(s.begin(), s.end());
  std::vector<std::int64_t> v(set.begin(), set.end());
  for (std::int64_t a : v) {
    for (std::int64_t step = 1; a + (L - 1) * step <= (v.empty() ? 0 : v.back()); ++step) {
      bool ok = true;
      for (std::int64_t j = 0; j < L && ok; ++j) ok = set.count(a + j * step) > 0;
      if (ok) return std::pair{a, step};
    }
  }
  return std::nullopt;
}

// All polynomials of degree <= d over F_q (including 0), as NPoly.
inline std::vector<NPoly> all_upto(int q, int d) {
  std::vector<NPoly> out;
  std::vector<int> c(static_cast<std::size_t>(d + 1), 0);
  for (;;) {
    out.push_back(make(q, c));
    std::size_t i = 0;
    while (i < c.size() && ++c[i] == q) c[i++] = 0;
    if (i == c.size()) break;
  }
  return out;
}

// Does any {F + A G : deg A < k}, G != 0, fit inside the set?
inline bool affine_exists(const std::vector<NPoly>& set, int q, int k) {
  int top = 0;
  for (const auto& p : set) top = std::max(top, p.deg());
  const auto Gs = all_upto(q, top);
  const auto As = all_upto(q, k - 1);
  auto in = [&](const NPoly& p) { return std::find(set.begin(), set.end(), p) != set.end(); };
  for (const auto& F : set) {
    for (const auto& G : Gs) {
      if (G.zero()) continue;
      bool ok = true;
      for (const auto& A : As) {
        if (!in(add(F, mul(A, G)))) {
          ok = false;
          break;
        }
      }
      if (ok) return true;
    }
  }
  return false;
}

}  // namespace oracle
