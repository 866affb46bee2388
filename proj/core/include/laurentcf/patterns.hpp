#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "laurentcf/cfcore.hpp"
#include "laurentcf/digitsource.hpp"

namespace lcf {

struct APWitness {
  std::int64_t start = 0;
  std::int64_t step = 1;
  std::int64_t length = 0;

  bool operator==(const APWitness&) const = default;
};

/// First progression of length L in (start, step) order, or none.
std::optional<APWitness> find_ap(std::span<const std::int64_t> set, std::int64_t L);

bool verify_ap(std::span<const std::int64_t> set, const APWitness& w);

/// {F + A G : deg A < k}, which has exactly q^k elements (A = 0 included).
struct AffineConfig {
  Poly F;
  Poly G;
  int k = 1;

  std::vector<Poly> members() const;
};

AffineConfig make_affine(Poly F, Poly G, int k);

inline constexpr std::uint64_t kDefaultAffineSearchCap = std::uint64_t{1} << 26;

/// Brute force over F in the set and G = monic(s - F) for s in the set.
/// Throws CapExceeded when |set|^2 q^k exceeds `cap`.
std::optional<AffineConfig> find_affine(std::span<const Poly> set, int k,
                                        std::uint64_t cap = kDefaultAffineSearchCap);

bool verify_affine(std::span<const Poly> set, const AffineConfig& c);

struct PatternReport {
  std::size_t horizon = 0;
  std::int64_t L = 3;
  int k = 1;
  std::vector<std::int64_t> degrees;  // {deg A_n} cap deg(U)
  std::vector<Poly> digits;           // {A_n} cap U
  std::optional<APWitness> ap;
  std::optional<AffineConfig> affine;
};

/// Scans the first `horizon` digits of a point.
PatternReport scan_point_patterns(std::span<const Poly> x_digits, const DigitSource& U,
                                  std::size_t horizon, std::int64_t L, int k,
                                  std::uint64_t cap = kDefaultAffineSearchCap);

}  // namespace lcf
