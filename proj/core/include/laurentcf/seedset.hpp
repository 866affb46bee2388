#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "laurentcf/cfcore.hpp"
#include "laurentcf/digitsource.hpp"

namespace lcf {

/// mu(T) = k for k! <= T < (k+1)!.
std::int64_t mu(const Integer& T);

/// The index set P: the union over k >= 2 of {k! + i k : 0 <= i < k!}.
bool member_P(const Integer& n);
/// #(P cap [1, T]).
Integer count_P(const Integer& T);
/// The m-th element of P (m >= 1).
Integer nth_P(const Integer& m);
/// Least element of P strictly greater than n.
Integer next_P(const Integer& n);

/// S* = {A_n in S : n in P}, where A_1, A_2, ... is the canonical
/// enumeration of the base source.
class SparseSubset {
 public:
  explicit SparseSubset(SourcePtr base) : base_(std::move(base)) {}

  const DigitSource& base() const noexcept { return *base_; }
  const SourcePtr& base_ptr() const noexcept { return base_; }

  bool member(const Poly& p) const;
  /// #Q_N(S*) = count_P(#Q_N(S)).
  Integer count_through(Degree N) const;
  /// Elements of S* of degree d in canonical order.
  std::vector<Poly> members_of_degree(Degree d, std::uint64_t cap = kDefaultEnumerationCap) const;

 private:
  SourcePtr base_;
};

enum class DigitPolicy { CanonicalMin, SeededRandom };

struct SeedSpec {
  int t = 3;
  DigitPolicy policy = DigitPolicy::CanonicalMin;
  std::uint64_t seed = 0;
};

/// Degree window [(2n)^t, (2n+1)^t) of the n-th digit.
Degree window_lo(int t, std::int64_t n);
Degree window_hi(int t, std::int64_t n);

/// The n-th window C_n of S*, described through base-source ranks:
/// C_n is the set of A_r with r in P and rank_lo < r <= rank_hi.
struct Window {
  std::int64_t n = 0;
  Degree deg_lo = 0;
  Degree deg_hi = 0;  // exclusive
  Integer rank_lo;    // #Q_{deg_lo - 1}(S)
  Integer rank_hi;    // #Q_{deg_hi - 1}(S)
  Integer count;      // #C_n
};

Window window(const SparseSubset& sparse, int t, std::int64_t n);
Integer window_count(const SparseSubset& sparse, int t, std::int64_t n);

/// Windows 1..n_max, computed on up to `threads` threads.
std::vector<Window> window_table(const SparseSubset& sparse, int t, std::int64_t n_max,
                                 unsigned threads = 1);

inline constexpr int kDefaultTCap = 8;

/// Smallest t >= 3 with C_n nonempty for every n <= horizon.
int choose_t(const SourcePtr& source, std::int64_t horizon, int t_cap = kDefaultTCap);

/// The j-th element (1-based, canonical order) of C_n.
Poly window_element(const SparseSubset& sparse, const Window& w, const Integer& j);

/// The digit chosen from C_n under the policy.
Poly seed_digit(const SparseSubset& sparse, const SeedSpec& spec, std::int64_t n);

/// Seed point as a lazily materialized digit stream.
DigitStream seed_stream(std::shared_ptr<const SparseSubset> sparse, SeedSpec spec);

/// 1 / (#C_1 ... #C_n).
Rational measure_weight(std::span<const Window> windows, std::int64_t n);

/// r_n = (log #C_1 + ... + log #C_n) / ((2 (deg A_1 + ... + deg A_n) + 1) log q).
std::vector<double> local_dim_profile(std::span<const Window> windows,
                                      std::span<const Degree> digit_degrees, std::uint32_t q);

/// Empirical constants of #C_n >= c0 q^((2n+1)^t / alpha) / n^rho over the
/// computed windows: rho by least squares, then c0 as the largest dyadic
/// value (granularity 2^-20 in log2) that makes the bound hold on every window.
struct MeasureBoundFit {
  double rho = 0.0;
  double log2_c0 = 0.0;
  double alpha = 1.0;
};

MeasureBoundFit fit_measure_bound(std::span<const Window> windows, int t, std::uint32_t q,
                                  double alpha = 1.0);

/// log2 of the right side of nu(I_n) <= (n!)^rho / (c0^n q^(sum (2j+1)^t / alpha)).
double measure_bound_log2(const MeasureBoundFit& fit, int t, std::uint32_t q, std::int64_t n);

}  // namespace lcf
