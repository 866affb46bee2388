#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "laurentcf/gfpoly.hpp"

namespace lcf {

/// A digit set S inside F_q^1[X] (polynomials of degree >= 1), listed in
/// canonical order. Per-degree counts are memoized; every query is safe to
/// call from several threads.
class DigitSource {
 public:
  explicit DigitSource(PrimeField field) : field_(field) {}
  virtual ~DigitSource() = default;

  DigitSource(const DigitSource&) = delete;
  DigitSource& operator=(const DigitSource&) = delete;

  const PrimeField& field() const noexcept { return field_; }

  /// Short kind name ("full", "irreducible", ...).
  virtual std::string kind() const = 0;
  /// Text form accepted by make_source.
  virtual std::string spec() const { return kind(); }

  virtual bool contains(const Poly& p) const = 0;

  /// True when counts come from a formula rather than enumeration.
  virtual bool closed_form_counts() const { return false; }
  /// True when unrank_within_degree needs no enumeration.
  virtual bool closed_form_unrank() const { return false; }

  /// D_d = #{A in S : deg A = d}; zero for d < 1.
  Integer count_by_degree(Degree d) const;
  /// #Q_N(S) = D_1 + ... + D_N; zero for N < 1.
  virtual Integer cumulative_count(Degree N) const;

  /// Whether some element has degree d.
  virtual bool has_degree(Degree d) const;
  /// #{d in [1, N] : D_d > 0}.
  virtual Integer present_degree_count(Degree N) const;
  /// Largest degree with elements, when the source is bounded.
  virtual std::optional<Degree> max_degree() const { return std::nullopt; }

  /// 1-based position of p among elements of its degree.
  virtual Integer rank_within_degree(const Poly& p) const;
  /// Element of degree d at 1-based position r.
  virtual Poly unrank_within_degree(Degree d, const Integer& r) const;
  /// Canonical minimum of degree d.
  virtual std::optional<Poly> min_of_degree(Degree d) const;
  /// All elements of degree d in canonical order, at most cap of them.
  virtual std::vector<Poly> members_of_degree(Degree d, std::uint64_t cap = kDefaultEnumerationCap) const;

  /// Position of p in the enumeration A_1, A_2, ... of S (NotMember if p is not in S).
  Integer source_rank(const Poly& p) const;
  /// A_r.
  Poly source_unrank(const Integer& r) const;

  /// Seeds the per-degree count memo, e.g. from a count-table cache file.
  /// Sources with closed-form counts check the values instead.
  void preload_counts(const std::map<Degree, Integer>& counts) const;

  std::uint64_t enumeration_cap() const noexcept { return cap_; }
  void set_enumeration_cap(std::uint64_t cap) noexcept { cap_ = cap; }

 protected:
  /// Count of one degree d >= 1. The default enumerates all polynomials of
  /// degree d under the enumeration cap.
  virtual Integer compute_count(Degree d) const;

  /// Polynomials of degree d filtered by contains(), under the cap.
  std::vector<Poly> filtered_degree(Degree d) const;

 private:
  PrimeField field_;
  std::uint64_t cap_ = kDefaultEnumerationCap;
  mutable std::shared_mutex mutex_;
  mutable std::map<Degree, Integer> counts_;
  mutable std::vector<Integer> prefix_;  // prefix_[N] = #Q_N
};

using SourcePtr = std::shared_ptr<const DigitSource>;

/// Every polynomial of degree >= 1.
class FullSource final : public DigitSource {
 public:
  using DigitSource::DigitSource;
  std::string kind() const override { return "full"; }
  bool contains(const Poly& p) const override { return p.degree() >= 1; }
  bool closed_form_counts() const override { return true; }
  bool closed_form_unrank() const override { return true; }
  Integer cumulative_count(Degree N) const override;
  bool has_degree(Degree d) const override { return d >= 1; }
  Integer present_degree_count(Degree N) const override;
  Integer rank_within_degree(const Poly& p) const override;
  Poly unrank_within_degree(Degree d, const Integer& r) const override;
  std::optional<Poly> min_of_degree(Degree d) const override;

 protected:
  Integer compute_count(Degree d) const override;
};

/// Monic polynomials of degree >= 1.
class MonicSource final : public DigitSource {
 public:
  using DigitSource::DigitSource;
  std::string kind() const override { return "monic"; }
  bool contains(const Poly& p) const override { return p.degree() >= 1 && p.is_monic(); }
  bool closed_form_counts() const override { return true; }
  bool closed_form_unrank() const override { return true; }
  Integer cumulative_count(Degree N) const override;
  bool has_degree(Degree d) const override { return d >= 1; }
  Integer present_degree_count(Degree N) const override;
  Integer rank_within_degree(const Poly& p) const override;
  Poly unrank_within_degree(Degree d, const Integer& r) const override;
  std::optional<Poly> min_of_degree(Degree d) const override;

 protected:
  Integer compute_count(Degree d) const override;
};

/// Polynomials A of degree >= 1 with A(0) = 0.
class ZeroConstantSource final : public DigitSource {
 public:
  using DigitSource::DigitSource;
  std::string kind() const override { return "zero_constant"; }
  bool contains(const Poly& p) const override { return p.degree() >= 1 && p.coeff(0) == 0; }
  bool closed_form_counts() const override { return true; }
  bool closed_form_unrank() const override { return true; }
  Integer cumulative_count(Degree N) const override;
  bool has_degree(Degree d) const override { return d >= 1; }
  Integer present_degree_count(Degree N) const override;
  Integer rank_within_degree(const Poly& p) const override;
  Poly unrank_within_degree(Degree d, const Integer& r) const override;
  std::optional<Poly> min_of_degree(Degree d) const override;

 protected:
  Integer compute_count(Degree d) const override;
};

/// Irreducible polynomials (all leading coefficients, or monic only).
class IrreducibleSource final : public DigitSource {
 public:
  IrreducibleSource(PrimeField field, bool monic_only = false)
      : DigitSource(field), monic_only_(monic_only) {}
  std::string kind() const override { return monic_only_ ? "irreducible_monic" : "irreducible"; }
  bool contains(const Poly& p) const override;
  bool closed_form_counts() const override { return true; }
  bool has_degree(Degree d) const override { return d >= 1; }
  Integer present_degree_count(Degree N) const override;
  std::optional<Poly> min_of_degree(Degree d) const override;

 protected:
  Integer compute_count(Degree d) const override;

 private:
  bool monic_only_;
};

/// A finite list of polynomials.
class ExplicitSource final : public DigitSource {
 public:
  ExplicitSource(PrimeField field, std::vector<Poly> members);
  std::string kind() const override { return "explicit"; }
  std::string spec() const override;
  bool contains(const Poly& p) const override;
  bool closed_form_counts() const override { return true; }
  bool closed_form_unrank() const override { return true; }
  Integer cumulative_count(Degree N) const override;
  bool has_degree(Degree d) const override;
  Integer present_degree_count(Degree N) const override;
  std::optional<Degree> max_degree() const override;
  Integer rank_within_degree(const Poly& p) const override;
  Poly unrank_within_degree(Degree d, const Integer& r) const override;
  std::optional<Poly> min_of_degree(Degree d) const override;
  std::vector<Poly> members_of_degree(Degree d, std::uint64_t cap = kDefaultEnumerationCap) const override;
  const std::vector<Poly>& members() const noexcept { return members_; }

 protected:
  Integer compute_count(Degree d) const override;

 private:
  std::vector<Poly> members_;  // sorted, distinct
};

/// Elements selected by a predicate. Counting enumerates, so degrees above
/// degree_cap raise CapExceeded.
class PredicateSource final : public DigitSource {
 public:
  PredicateSource(PrimeField field, std::string name, std::function<bool(const Poly&)> pred,
                  Degree degree_cap);
  std::string kind() const override { return "predicate"; }
  std::string spec() const override { return "predicate:" + name_; }
  bool contains(const Poly& p) const override;
  Degree degree_cap() const noexcept { return degree_cap_; }

 protected:
  Integer compute_count(Degree d) const override;

 private:
  std::string name_;
  std::function<bool(const Poly&)> pred_;
  Degree degree_cap_;
};

/// Parses "full", "irreducible", "irreducible_monic", "monic",
/// "zero_constant" or "explicit:P1;P2;...".
SourcePtr make_source(PrimeField field, std::string_view spec,
                      std::uint64_t cap = kDefaultEnumerationCap);

/// D_d for d = 1..n_max with r_d = log D_d / (2 d log q); degrees with
/// D_d = 0 are skipped.
struct ConvergenceProfile {
  std::vector<std::pair<Degree, double>> ratios;
  double tail_max = 0.0;  // max over d in the upper half of [1, n_max]
};

ConvergenceProfile convergence_profile(const DigitSource& s, Degree n_max);

/// Fit of #Q_N ~ q^(N/alpha) / N^beta on [n_min, n_max], with the envelope
/// gamma_lo <= #Q_N N^beta / q^(N/alpha) <= gamma_hi measured on the window.
struct GrowthFit {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma_lo = 0.0;
  double gamma_hi = 0.0;
  double alpha_raw = 0.0;
  double beta_raw = 0.0;
  bool alpha_snapped = false;
  bool beta_snapped = false;
  Degree n_min = 0;
  Degree n_max = 0;
};

GrowthFit fit_growth(const DigitSource& s, Degree n_min, Degree n_max);

}  // namespace lcf
