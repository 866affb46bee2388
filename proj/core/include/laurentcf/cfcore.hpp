#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "laurentcf/gfpoly.hpp"
#include "laurentcf/laurent.hpp"

namespace lcf {

/// Finite digit prefix (A_1, ..., A_n); every digit has degree >= 1.
using DigitSeq = std::vector<Poly>;

/// Throws OutOfDomain if some digit has degree < 1.
void check_digits(std::span<const Poly> digits);

/// Sum of deg A_i.
Degree degree_sum(std::span<const Poly> digits);

/// An infinite (or long) digit sequence given by a generator, with the
/// prefix materialized on demand. Single consumer.
class DigitStream {
 public:
  /// gen(n) returns the n-th digit (1-based), or nullopt past the end.
  using Generator = std::function<std::optional<Poly>(std::size_t)>;

  DigitStream(PrimeField field, Generator gen) : field_(field), gen_(std::move(gen)) {}

  const PrimeField& field() const noexcept { return field_; }

  /// Materializes digits 1..n (fewer if the generator ends) and returns them.
  const DigitSeq& prefix(std::size_t n);

 private:
  PrimeField field_;
  Generator gen_;
  DigitSeq cache_;
  bool ended_ = false;
};

struct ConvergentPair {
  Poly p;
  Poly q;
};

/// Runs P_n = A_n P_{n-1} + P_{n-2}, Q_n = A_n Q_{n-1} + Q_{n-2} from
/// P_0 = 0, Q_0 = 1, P_{-1} = 1, Q_{-1} = 0.
class ConvergentAccumulator {
 public:
  explicit ConvergentAccumulator(PrimeField field);

  void push(const Poly& digit);
  std::size_t size() const noexcept { return n_; }
  const ConvergentPair& current() const noexcept { return cur_; }
  const ConvergentPair& previous() const noexcept { return prev_; }

 private:
  std::size_t n_ = 0;
  ConvergentPair cur_;
  ConvergentPair prev_;
};

/// Digits of r by the Euclidean algorithm; r must lie in the unit disc.
DigitSeq cf_expand_rational(const RationalFunction& r);

struct CertifiedDigits {
  DigitSeq digits;             // only certified digits
  std::size_t certified_count = 0;
  /// The remainder after the certified digits is zero within its known
  /// precision: the expansion ends there for exact input, and cannot be
  /// told apart from a terminating one otherwise.
  bool terminated = false;
};

/// Digits valid for every series that agrees with x through its known
/// window. Digit n is accepted while 2 (deg A_1 + ... + deg A_n) + 1 <= m.
CertifiedDigits cf_digits_certified(const LaurentSeries& x, std::size_t max_digits);

/// Convergents 1..n.
std::vector<ConvergentPair> convergents(std::span<const Poly> digits, std::size_t n);

/// Value of the finite continued fraction [0; A_1, ..., A_n].
RationalFunction cf_value(const PrimeField& field, std::span<const Poly> digits);

/// Diameter q^(-2 sum deg A_i - 1) of the cylinder I(A_1, ..., A_n).
QPower cylinder_diameter(std::span<const Poly> prefix);

/// True iff the first prefix.size() digits of x equal the prefix. Throws
/// PrecisionExhausted when x is not known deeply enough to decide.
bool cylinder_contains(std::span<const Poly> prefix, const LaurentSeries& x);

inline constexpr std::size_t kDefaultDistanceHorizon = 512;

/// Distance between any point with digit prefix a and any point with digit
/// prefix b, where a and b first differ at index m <= horizon. Only digits
/// 1..m of each sequence are read.
QPower point_distance_by_digits(std::span<const Poly> a, std::span<const Poly> b,
                                std::size_t horizon = kDefaultDistanceHorizon);

/// First index (1-based) where a and b differ, if any within the horizon.
std::optional<std::size_t> first_divergence(std::span<const Poly> a, std::span<const Poly> b,
                                            std::size_t horizon);

}  // namespace lcf
