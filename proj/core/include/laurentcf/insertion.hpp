#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "laurentcf/cfcore.hpp"
#include "laurentcf/densities.hpp"
#include "laurentcf/digitsource.hpp"
#include "laurentcf/seedset.hpp"

namespace lcf {

/// Canonical minimum of U in each degree d in deg(U) cap [1, cap].
std::map<Degree, Poly> build_u_deg(const DigitSource& U, Degree cap);

/// S~ = S minus the canonical minimum of U in every degree of U. The
/// representatives are found lazily, so the set is defined at every degree.
class ExcludingRepresentatives final : public DigitSource {
 public:
  ExcludingRepresentatives(SourcePtr S, SourcePtr U);

  std::string kind() const override { return "excluding_representatives"; }
  std::string spec() const override;
  bool contains(const Poly& p) const override;
  bool closed_form_counts() const override { return S_->closed_form_counts(); }
  bool closed_form_unrank() const override { return S_->closed_form_unrank(); }
  Integer cumulative_count(Degree N) const override;
  std::optional<Degree> max_degree() const override { return S_->max_degree(); }
  Integer rank_within_degree(const Poly& p) const override;
  Poly unrank_within_degree(Degree d, const Integer& r) const override;
  std::optional<Poly> min_of_degree(Degree d) const override;

  std::optional<Poly> representative(Degree d) const;

 protected:
  Integer compute_count(Degree d) const override;

 private:
  SourcePtr S_;
  SourcePtr U_;
};

/// U minus S*.
class ComplementOfSparse final : public DigitSource {
 public:
  ComplementOfSparse(SourcePtr U, std::shared_ptr<const SparseSubset> sparse);

  std::string kind() const override { return "complement_of_sparse"; }
  std::string spec() const override;
  bool contains(const Poly& p) const override;
  std::optional<Degree> max_degree() const override { return U_->max_degree(); }
  std::vector<Poly> members_of_degree(Degree d, std::uint64_t cap = kDefaultEnumerationCap) const override;
  Integer rank_within_degree(const Poly& p) const override;
  Poly unrank_within_degree(Degree d, const Integer& r) const override;
  std::optional<Poly> min_of_degree(Degree d) const override;

 protected:
  Integer compute_count(Degree d) const override;

 private:
  SourcePtr U_;
  std::shared_ptr<const SparseSubset> sparse_;
};

/// Everything derived from (q, S, U): S~, S* over S~, and U minus S*.
struct PlanContext {
  SourcePtr S;
  SourcePtr U;
  std::shared_ptr<const ExcludingRepresentatives> S_tilde;
  std::shared_ptr<const SparseSubset> sparse;
  std::shared_ptr<const ComplementOfSparse> u_minus;
};

PlanContext make_plan_context(SourcePtr S, SourcePtr U);

struct InsertionPlan {
  PrimeField field{2};
  std::string S_spec;
  std::string U_spec;
  int t = 3;
  Degree horizon = 0;            // density horizon N
  std::vector<Rational> eps;     // eps[k-1] = eps_k
  std::vector<Degree> N;         // N_1 < N_2 < ...
  std::vector<std::vector<Poly>> W;
  std::vector<std::int64_t> M;   // M_1 < M_2 < ...; M_0 = 0 is implicit
  std::map<Degree, Poly> u_deg;

  std::size_t size() const noexcept { return N.size(); }
};

/// The last `count` argmax points of the profile (all of them for count = 0).
std::vector<Degree> choose_nk(const DensityProfile& profile, std::size_t count);

/// Q_{N_k}(U minus S*) minus Q_{N_{k-1}}(U minus S*), sorted by degree then
/// canonical order.
std::vector<Poly> build_wk(const DigitSource& u_minus, Degree n_prev, Degree n_k,
                           std::uint64_t cap = kDefaultEnumerationCap);

/// f(n) = sum_{i<=n+1} (2i+1)^t / sum_{i<=n} (2i)^t <= 1 + eps, exactly.
bool gap_holds(int t, const Rational& eps, std::int64_t n);

/// n* such that f(n) <= 1 + eps for every n >= n*. Certified by
///   n t (2n+1)^(t-1) + (2n+3)^t <= eps (2n)^(t+1) / (2(t+1)),
/// which bounds the excess of the numerator over the denominator and whose
/// left-to-right ratio decreases in n.
std::int64_t verify_gap_threshold(int t, const Rational& eps);

/// Least M with f(n) <= 1 + eps for every n >= M (direct check below n*).
std::int64_t minimal_gap_threshold(int t, const Rational& eps);

/// Least M > M_prev with sum_{w in W} deg w <= eps sum_{i=M_prev+1}^{M} (2i)^t
/// and M at least the minimal gap threshold.
std::int64_t choose_mk(std::span<const Poly> W, const Rational& eps, int t, std::int64_t M_prev);

struct PlanBuildOptions {
  int t = 0;                     // 0: choose_t on S~
  Degree horizon = 12;
  std::size_t count = 0;         // number of N_k; 0 takes every argmax point
  std::vector<Rational> eps;     // empty: eps_k = 1/(k+1)
  std::int64_t t_horizon = 6;
};

InsertionPlan build_plan(const PlanContext& ctx, const PlanBuildOptions& opts);

/// Per-k record of a successful validation.
struct PlanCheck {
  std::size_t k = 0;
  Integer w_degree_sum;
  Integer window_sum;            // sum_{i=M_{k-1}+1}^{M_k} (2i)^t
  std::int64_t n_star = 0;
  std::int64_t checked_through = 0;
};

/// Recomputes every condition of the plan from scratch; throws
/// PlanViolation on the first failure.
std::vector<PlanCheck> validate_plan(const InsertionPlan& plan, const PlanContext& ctx);

/// Inserts the block W_k right after the M_k-th seed digit. The output is
/// truncated at `horizon` digits.
DigitSeq insert_digits(std::span<const Poly> seed, const InsertionPlan& plan, std::size_t horizon);

/// Removes the W blocks from the first `horizon` digits of x.
DigitSeq eliminate(std::span<const Poly> x, const InsertionPlan& plan, std::size_t horizon);

struct HolderSample {
  std::int64_t depth = 0;        // s: the pair diverges at seed index s+1
  std::size_t variant = 0;
  Degree x_exponent = 0;         // ||x1 - x2|| = q^x_exponent
  Degree y_exponent = 0;         // ||f(x1) - f(x2)|| = q^y_exponent
  double exponent = 0.0;         // y_exponent / x_exponent
  std::size_t k = 0;             // M_k <= s < M_{k+1}
  double bound = 1.0;            // 1 / (1 + 2 eps_k), or 1 before M_1
  bool ok = true;
};

struct HolderTier {
  std::size_t k = 0;
  Rational eps;
  double bound = 1.0;
  std::vector<std::int64_t> depths;
  double min_exponent = 0.0;
  double max_exponent = 0.0;
  Degree min_separation = 0;     // smallest ||x1 - x2|| exponent seen
  bool nondecreasing = true;     // per-depth minimum exponents along depth
  bool ok = true;
};

struct HolderReport {
  double tolerance = 0.05;
  std::vector<HolderSample> samples;
  std::vector<HolderTier> tiers;
  bool ok = true;
};

inline constexpr double kHolderTolerance = 0.05;

HolderReport holder_diagnostic(const InsertionPlan& plan, const PlanContext& ctx,
                               const SeedSpec& spec, std::span<const std::int64_t> depths,
                               std::size_t variants_per_depth, unsigned threads = 1,
                               double tolerance = kHolderTolerance);

/// Seed digits 1..n of the plan's seed point.
DigitSeq seed_prefix(const PlanContext& ctx, const SeedSpec& spec, std::int64_t n,
                     unsigned threads = 1);

}  // namespace lcf
