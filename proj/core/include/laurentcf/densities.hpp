#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "laurentcf/digitsource.hpp"

namespace lcf {

/// Finite-horizon view of an upper relative density: the exact ratios for
/// N = 1..horizon, their running maximum, and the indices where a ratio
/// reaches the running maximum of everything before it.
struct DensityProfile {
  struct Entry {
    Degree N;
    Rational ratio;
  };
  Degree horizon = 0;
  std::vector<Entry> ratios;  // indices with an empty denominator are skipped
  Rational running_max;
  std::vector<Degree> argmax_points;

  const Rational* ratio_at(Degree N) const;
};

/// Builds the profile from numerator/denominator counts indexed by N.
DensityProfile make_profile(Degree horizon, const std::function<Integer(Degree)>& num,
                            const std::function<Integer(Degree)>& den);

inline constexpr std::size_t kSubsetSamples = 100;
inline constexpr std::uint64_t kSubsetSeed = 0x5eed;

/// Samples members of U up to degree `horizon` and checks they lie in S.
/// Throws NotSubset on the first violation.
void check_subset_sampled(const DigitSource& U, const DigitSource& S, Degree horizon,
                          std::size_t samples = kSubsetSamples, std::uint64_t seed = kSubsetSeed);

/// #Q_N(U) / #Q_N(S) for N = 1..horizon.
DensityProfile poly_density_profile(const DigitSource& U, const DigitSource& S, Degree horizon);

/// A named predicate on positive integers.
struct IntSet {
  std::string name;
  std::function<bool(std::int64_t)> contains;
};

/// Parses "all", "even", "odd", "squares", "primes", "mod:m:r" or "explicit:1,3,5".
IntSet parse_int_set(std::string_view spec);

/// #(B cap [1,N]) / #(G cap [1,N]) for N = 1..horizon. B must be inside G
/// on [1, horizon] (NotSubset otherwise).
DensityProfile int_density_profile(const IntSet& B, const IntSet& G, std::int64_t horizon);

/// deg(S) cap [1, cap].
std::vector<Degree> degree_set(const DigitSource& s, Degree cap);

}  // namespace lcf
