#include "laurentcf/densities.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <set>

#include "laurentcf/error.hpp"

namespace lcf {

const Rational* DensityProfile::ratio_at(Degree N) const {
  for (const Entry& e : ratios) {
    if (e.N == N) return &e.ratio;
  }
  return nullptr;
}

DensityProfile make_profile(Degree horizon, const std::function<Integer(Degree)>& num,
                            const std::function<Integer(Degree)>& den) {
  if (horizon < 1) throw Error(ErrorKind::InvalidArgument, "horizon must be >= 1");
  DensityProfile out;
  out.horizon = horizon;
  for (Degree N = 1; N <= horizon; ++N) {
    const Integer d = den(N);
    if (d == 0) continue;
    Rational r(num(N), d);
    r.canonicalize();
    if (out.ratios.empty() || r >= out.running_max) {
      out.running_max = r;
      out.argmax_points.push_back(N);
    }
    out.ratios.push_back({N, std::move(r)});
  }
  if (out.ratios.empty()) {
    throw Error(ErrorKind::EmptyDenominator,
                "denominator set is empty through N = " + std::to_string(horizon));
  }
  return out;
}

void check_subset_sampled(const DigitSource& U, const DigitSource& S, Degree horizon,
                          std::size_t samples, std::uint64_t seed) {
  std::vector<Degree> degrees;
  for (Degree d = 1; d <= horizon; ++d) {
    if (U.has_degree(d)) degrees.push_back(d);
  }
  std::mt19937_64 pick(seed);
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(static_cast<unsigned long>(seed));
  for (std::size_t i = 0; i < samples && !degrees.empty();) {
    const std::size_t at = static_cast<std::size_t>(pick() % degrees.size());
    const Degree d = degrees[at];
    try {
      const Integer n = U.count_by_degree(d);
      Integer r = rng.get_z_range(n);
      r += 1;
      const Poly p = U.unrank_within_degree(d, r);
      if (!S.contains(p)) {
        throw Error(ErrorKind::NotSubset,
                    p.to_string() + " lies in " + U.spec() + " but not in " + S.spec());
      }
      ++i;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CapExceeded) throw;
      degrees.erase(degrees.begin() + static_cast<std::ptrdiff_t>(at));
    }
  }
}

DensityProfile poly_density_profile(const DigitSource& U, const DigitSource& S, Degree horizon) {
  if (U.field() != S.field()) throw Error(ErrorKind::FieldMismatch, "U and S over different fields");
  check_subset_sampled(U, S, horizon);
  return make_profile(
      horizon, [&](Degree N) { return U.cumulative_count(N); },
      [&](Degree N) { return S.cumulative_count(N); });
}

namespace {

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::ParseError, "bad integer '" + std::string(s) + "'");
  }
  return v;
}

bool is_square(std::int64_t n) {
  if (n < 0) return false;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n;
}

}  // namespace

IntSet parse_int_set(std::string_view spec) {
  const std::string name(spec);
  if (spec == "all") return {name, [](std::int64_t) { return true; }};
  if (spec == "even") return {name, [](std::int64_t n) { return n % 2 == 0; }};
  if (spec == "odd") return {name, [](std::int64_t n) { return n % 2 != 0; }};
  if (spec == "squares") return {name, is_square};
  if (spec == "primes") {
    return {name, [](std::int64_t n) { return n > 1 && is_prime(static_cast<std::uint64_t>(n)); }};
  }
  if (spec.starts_with("mod:")) {
    const std::string_view rest = spec.substr(4);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw Error(ErrorKind::ParseError, "expected mod:m:r");
    const std::int64_t m = parse_int(rest.substr(0, colon));
    const std::int64_t r = parse_int(rest.substr(colon + 1));
    if (m < 1) throw Error(ErrorKind::ParseError, "modulus must be >= 1");
    return {name, [m, r](std::int64_t n) { return ((n - r) % m + m) % m == 0; }};
  }
  if (spec.starts_with("explicit:")) {
    std::set<std::int64_t> values;
    std::string_view rest = spec.substr(9);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      values.insert(parse_int(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return {name, [values = std::move(values)](std::int64_t n) { return values.contains(n); }};
  }
  throw Error(ErrorKind::ParseError, "unknown integer set '" + name + "'");
}

DensityProfile int_density_profile(const IntSet& B, const IntSet& G, std::int64_t horizon) {
  if (horizon < 1) throw Error(ErrorKind::InvalidArgument, "horizon must be >= 1");
  std::vector<std::int64_t> nb(static_cast<std::size_t>(horizon) + 1, 0);
  std::vector<std::int64_t> ng(static_cast<std::size_t>(horizon) + 1, 0);
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const bool in_b = B.contains(n);
    const bool in_g = G.contains(n);
    if (in_b && !in_g) {
      throw Error(ErrorKind::NotSubset, std::to_string(n) + " is in " + B.name + " but not in " + G.name);
    }
    const auto i = static_cast<std::size_t>(n);
    nb[i] = nb[i - 1] + (in_b ? 1 : 0);
    ng[i] = ng[i - 1] + (in_g ? 1 : 0);
  }
  return make_profile(
      horizon, [&](Degree N) { return Integer(static_cast<long>(nb[static_cast<std::size_t>(N)])); },
      [&](Degree N) { return Integer(static_cast<long>(ng[static_cast<std::size_t>(N)])); });
}

std::vector<Degree> degree_set(const DigitSource& s, Degree cap) {
  std::vector<Degree> out;
  const Degree top = s.max_degree() ? std::min(cap, *s.max_degree()) : cap;
  for (Degree d = 1; d <= top; ++d) {
    if (s.has_degree(d)) out.push_back(d);
  }
  return out;
}

}  // namespace lcf
