#include "laurentcf/patterns.hpp"

#include <algorithm>
#include <set>

#include "laurentcf/error.hpp"

namespace lcf {

namespace {

std::vector<std::int64_t> sorted_unique(std::span<const std::int64_t> set) {
  std::vector<std::int64_t> v(set.begin(), set.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool has(const std::vector<std::int64_t>& sorted, std::int64_t x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

}  // namespace

std::optional<APWitness> find_ap(std::span<const std::int64_t> set, std::int64_t L) {
  const std::vector<std::int64_t> v = sorted_unique(set);
  if (L < 1 || static_cast<std::size_t>(L) > v.size()) return std::nullopt;
  if (L == 1) return APWitness{v.front(), 1, 1};
  const std::int64_t top = v.back();
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const std::int64_t step = v[j] - v[i];
      if (v[i] + (L - 1) * step > top) break;
      std::int64_t m = 2;
      while (m < L && has(v, v[i] + m * step)) ++m;
      if (m == L) return APWitness{v[i], step, L};
    }
  }
  return std::nullopt;
}

bool verify_ap(std::span<const std::int64_t> set, const APWitness& w) {
  if (w.step < 1 || w.length < 1) return false;
  const std::vector<std::int64_t> v = sorted_unique(set);
  for (std::int64_t j = 0; j < w.length; ++j) {
    if (!has(v, w.start + j * w.step)) return false;
  }
  return true;
}

AffineConfig make_affine(Poly F, Poly G, int k) {
  if (G.is_zero()) throw Error(ErrorKind::InvalidArgument, "G must be nonzero");
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  if (F.field() != G.field()) throw Error(ErrorKind::FieldMismatch, "F and G over different fields");
  return {std::move(F), std::move(G), k};
}

std::vector<Poly> AffineConfig::members() const {
  const PrimeField field = F.field();
  const Integer total = pow(field.q(), static_cast<std::uint64_t>(k));
  std::vector<Poly> out;
  for (Integer a = 0; a < total; ++a) out.push_back(F + Poly::from_value(field, a) * G);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<AffineConfig> find_affine(std::span<const Poly> set, int k, std::uint64_t cap) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  std::vector<Poly> v(set.begin(), set.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (v.empty()) return std::nullopt;
  const PrimeField field = v.front().field();
  const Integer qk = pow(field.q(), static_cast<std::uint64_t>(k));
  if (qk > static_cast<unsigned long>(v.size())) return std::nullopt;
  const Integer candidates = qk * static_cast<unsigned long>(v.size()) * static_cast<unsigned long>(v.size());
  if (candidates > cap) {
    throw Error(ErrorKind::CapExceeded, "affine search needs " + to_decimal(candidates) +
                                            " membership tests, cap is " + std::to_string(cap));
  }
  std::vector<Poly> multipliers;
  for (Integer a = 1; a < qk; ++a) multipliers.push_back(Poly::from_value(field, a));

  auto in_set = [&](const Poly& p) { return std::binary_search(v.begin(), v.end(), p); };
  for (const Poly& F : v) {
    std::set<Poly> tried;
    for (const Poly& s : v) {
      if (s == F) continue;
      Poly G = (s - F).monic();
      if (!tried.insert(G).second) continue;
      const bool all = std::all_of(multipliers.begin(), multipliers.end(),
                                   [&](const Poly& A) { return in_set(F + A * G); });
      if (all) return AffineConfig{F, std::move(G), k};
    }
  }
  return std::nullopt;
}

bool verify_affine(std::span<const Poly> set, const AffineConfig& c) {
  if (c.G.is_zero() || c.k < 1) return false;
  std::vector<Poly> v(set.begin(), set.end());
  std::sort(v.begin(), v.end());
  const std::vector<Poly> members = c.members();
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) return false;
  return std::all_of(members.begin(), members.end(),
                     [&](const Poly& p) { return std::binary_search(v.begin(), v.end(), p); });
}

PatternReport scan_point_patterns(std::span<const Poly> x_digits, const DigitSource& U,
                                  std::size_t horizon, std::int64_t L, int k, std::uint64_t cap) {
  if (L < 3) throw Error(ErrorKind::InvalidArgument, "L must be >= 3");
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  if (horizon > x_digits.size()) {
    throw Error(ErrorKind::PrecisionExhausted, "point has " + std::to_string(x_digits.size()) +
                                                   " digits, horizon is " + std::to_string(horizon));
  }
  PatternReport report;
  report.horizon = horizon;
  report.L = L;
  report.k = k;
  std::set<std::int64_t> degrees;
  for (const Poly& a : x_digits.first(horizon)) {
    if (a.field() != U.field()) throw Error(ErrorKind::FieldMismatch, "digits and U over different fields");
    if (U.has_degree(a.degree())) degrees.insert(a.degree());
    if (U.contains(a)) report.digits.push_back(a);
  }
  std::sort(report.digits.begin(), report.digits.end());
  report.degrees.assign(degrees.begin(), degrees.end());
  report.ap = find_ap(report.degrees, L);
  report.affine = find_affine(report.digits, k, cap);
  if (report.ap && !verify_ap(report.degrees, *report.ap)) {
    throw Error(ErrorKind::InvalidArgument, "progression witness failed re-verification");
  }
  if (report.affine && !verify_affine(report.digits, *report.affine)) {
    throw Error(ErrorKind::InvalidArgument, "affine witness failed re-verification");
  }
  return report;
}

}  // namespace lcf
