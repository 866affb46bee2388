#include "laurentcf/insertion.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>

#include "laurentcf/error.hpp"

namespace lcf {

std::map<Degree, Poly> build_u_deg(const DigitSource& U, Degree cap) {
  std::map<Degree, Poly> out;
  for (Degree d = 1; d <= cap; ++d) {
    if (!U.has_degree(d)) continue;
    if (auto p = U.min_of_degree(d)) out.emplace(d, std::move(*p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// S~

ExcludingRepresentatives::ExcludingRepresentatives(SourcePtr S, SourcePtr U)
    : DigitSource(S->field()), S_(std::move(S)), U_(std::move(U)) {
  if (U_->field() != field()) throw Error(ErrorKind::FieldMismatch, "S and U over different fields");
  set_enumeration_cap(S_->enumeration_cap());
}

std::string ExcludingRepresentatives::spec() const {
  return "excluding_representatives(" + S_->spec() + "," + U_->spec() + ")";
}

std::optional<Poly> ExcludingRepresentatives::representative(Degree d) const {
  if (d < 1 || !U_->has_degree(d)) return std::nullopt;
  return U_->min_of_degree(d);
}

bool ExcludingRepresentatives::contains(const Poly& p) const {
  if (!S_->contains(p)) return false;
  const auto rep = representative(p.degree());
  return !rep || *rep != p;
}

Integer ExcludingRepresentatives::compute_count(Degree d) const {
  Integer n = S_->count_by_degree(d);
  if (const auto rep = representative(d)) {
    if (!S_->contains(*rep)) {
      throw Error(ErrorKind::NotSubset, "representative " + rep->to_string() + " of U is not in " + S_->spec());
    }
    n -= 1;
  }
  return n;
}

// Relies on U being inside S (checked by sampling when a plan is built, and
// per degree whenever a count is taken).
Integer ExcludingRepresentatives::cumulative_count(Degree N) const {
  if (N < 1) return Integer(0);
  return S_->cumulative_count(N) - U_->present_degree_count(N);
}

Integer ExcludingRepresentatives::rank_within_degree(const Poly& p) const {
  if (!contains(p)) throw Error(ErrorKind::NotMember, p.to_string() + " is not in " + spec());
  Integer r = S_->rank_within_degree(p);
  if (const auto rep = representative(p.degree()); rep && *rep < p) r -= 1;
  return r;
}

Poly ExcludingRepresentatives::unrank_within_degree(Degree d, const Integer& r) const {
  const Integer n = count_by_degree(d);
  if (r < 1 || r > n) {
    throw Error(ErrorKind::OutOfDomain, "rank " + to_decimal(r) + " outside degree " +
                                            std::to_string(d) + " of " + spec());
  }
  const auto rep = representative(d);
  if (!rep) return S_->unrank_within_degree(d, r);
  const Integer k = S_->rank_within_degree(*rep);
  return S_->unrank_within_degree(d, r < k ? r : Integer(r + 1));
}

std::optional<Poly> ExcludingRepresentatives::min_of_degree(Degree d) const {
  if (d < 1 || count_by_degree(d) == 0) return std::nullopt;
  return unrank_within_degree(d, Integer(1));
}

// ---------------------------------------------------------------------------
// U minus S*

ComplementOfSparse::ComplementOfSparse(SourcePtr U, std::shared_ptr<const SparseSubset> sparse)
    : DigitSource(U->field()), U_(std::move(U)), sparse_(std::move(sparse)) {
  set_enumeration_cap(U_->enumeration_cap());
}

std::string ComplementOfSparse::spec() const {
  return "complement_of_sparse(" + U_->spec() + "," + sparse_->base().spec() + ")";
}

bool ComplementOfSparse::contains(const Poly& p) const {
  return U_->contains(p) && !sparse_->member(p);
}

Integer ComplementOfSparse::compute_count(Degree d) const {
  Integer n = U_->count_by_degree(d);
  for (const Poly& p : sparse_->members_of_degree(d, enumeration_cap())) {
    if (U_->contains(p)) n -= 1;
  }
  return n;
}

std::vector<Poly> ComplementOfSparse::members_of_degree(Degree d, std::uint64_t cap) const {
  std::vector<Poly> out;
  for (Poly& p : U_->members_of_degree(d, cap)) {
    if (!sparse_->member(p)) out.push_back(std::move(p));
  }
  return out;
}

Integer ComplementOfSparse::rank_within_degree(const Poly& p) const {
  const std::vector<Poly> members = members_of_degree(p.degree(), enumeration_cap());
  const auto it = std::lower_bound(members.begin(), members.end(), p);
  if (it == members.end() || *it != p) throw Error(ErrorKind::NotMember, p.to_string() + " is not in " + spec());
  return Integer(static_cast<unsigned long>(it - members.begin() + 1));
}

Poly ComplementOfSparse::unrank_within_degree(Degree d, const Integer& r) const {
  const std::vector<Poly> members = members_of_degree(d, enumeration_cap());
  if (r < 1 || r > static_cast<unsigned long>(members.size())) {
    throw Error(ErrorKind::OutOfDomain, "rank " + to_decimal(r) + " outside degree " +
                                            std::to_string(d) + " of " + spec());
  }
  return members[r.get_ui() - 1];
}

std::optional<Poly> ComplementOfSparse::min_of_degree(Degree d) const {
  const std::vector<Poly> members = members_of_degree(d, enumeration_cap());
  if (members.empty()) return std::nullopt;
  return members.front();
}

PlanContext make_plan_context(SourcePtr S, SourcePtr U) {
  if (S->field() != U->field()) throw Error(ErrorKind::FieldMismatch, "S and U over different fields");
  PlanContext ctx;
  ctx.S = S;
  ctx.U = U;
  ctx.S_tilde = std::make_shared<ExcludingRepresentatives>(S, U);
  ctx.sparse = std::make_shared<SparseSubset>(ctx.S_tilde);
  ctx.u_minus = std::make_shared<ComplementOfSparse>(U, ctx.sparse);
  return ctx;
}

// ---------------------------------------------------------------------------
// Plan parameters

std::vector<Degree> choose_nk(const DensityProfile& profile, std::size_t count) {
  const auto& pts = profile.argmax_points;
  if (count == 0) return pts;
  if (pts.size() < count) {
    throw Error(ErrorKind::InsufficientArgmax, "profile has " + std::to_string(pts.size()) +
                                                   " argmax points, " + std::to_string(count) +
                                                   " requested");
  }
  return {pts.end() - static_cast<std::ptrdiff_t>(count), pts.end()};
}

std::vector<Poly> build_wk(const DigitSource& u_minus, Degree n_prev, Degree n_k, std::uint64_t cap) {
  if (n_k < n_prev) throw Error(ErrorKind::InvalidArgument, "N_k must not decrease");
  std::vector<Poly> out;
  for (Degree d = std::max<Degree>(n_prev + 1, 1); d <= n_k; ++d) {
    for (Poly& p : u_minus.members_of_degree(d, cap)) out.push_back(std::move(p));
    if (out.size() > cap) throw Error(ErrorKind::CapExceeded, "W_k exceeds the enumeration cap");
  }
  return out;
}

namespace {

Integer ipow(std::int64_t base, int t) {
  return pow(static_cast<std::uint64_t>(base), static_cast<std::uint64_t>(t));
}

void check_eps(const Rational& eps) {
  if (eps <= 0) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
}

// Running sums num(n) = sum_{i<=n+1} (2i+1)^t and den(n) = sum_{i<=n} (2i)^t.
class GapSums {
 public:
  GapSums(int t, std::int64_t n) : t_(t) {
    for (std::int64_t i = 1; i <= n; ++i) den_ += ipow(2 * i, t);
    for (std::int64_t i = 1; i <= n + 1; ++i) num_ += ipow(2 * i + 1, t);
    n_ = n;
  }
  void advance() {
    ++n_;
    den_ += ipow(2 * n_, t_);
    num_ += ipow(2 * n_ + 3, t_);
  }
  bool holds(const Rational& eps) const {
    // num <= (1 + eps) den  <=>  b num <= (a + b) den for eps = a / b.
    return num_ * eps.get_den() <= den_ * (eps.get_num() + eps.get_den());
  }
  std::int64_t n() const { return n_; }

 private:
  int t_;
  std::int64_t n_ = 0;
  Integer num_;
  Integer den_;
};

}  // namespace

bool gap_holds(int t, const Rational& eps, std::int64_t n) {
  check_eps(eps);
  if (n < 1) return false;
  return GapSums(t, n).holds(eps);
}

std::int64_t verify_gap_threshold(int t, const Rational& eps) {
  if (t < 1) throw Error(ErrorKind::InvalidArgument, "t must be >= 1");
  check_eps(eps);
  // (2i+1)^t - (2i)^t <= t (2i+1)^(t-1) bounds the numerator excess over
  // the first n terms by n t (2n+1)^(t-1); the extra last term is
  // (2n+3)^t, and sum_{i<=n} (2i)^t >= (2n)^(t+1) / (2(t+1)).
  const Integer a = eps.get_num();
  const Integer b = eps.get_den();
  for (std::int64_t n = 1;; ++n) {
    Integer lhs = ipow(2 * n + 1, t - 1) * (n * t) + ipow(2 * n + 3, t);
    lhs *= b * (2 * (t + 1));
    const Integer rhs = a * ipow(2 * n, t + 1);
    if (lhs <= rhs) return n;
  }
}

std::int64_t minimal_gap_threshold(int t, const Rational& eps) {
  std::int64_t m = verify_gap_threshold(t, eps);
  while (m > 1 && gap_holds(t, eps, m - 1)) --m;
  return m;
}

std::int64_t choose_mk(std::span<const Poly> W, const Rational& eps, int t, std::int64_t M_prev) {
  check_eps(eps);
  Integer wsum;
  for (const Poly& w : W) wsum += static_cast<long>(w.degree());
  const std::int64_t start = std::max(M_prev + 1, minimal_gap_threshold(t, eps));
  Integer window_sum;
  for (std::int64_t i = M_prev + 1; i <= start; ++i) window_sum += ipow(2 * i, t);
  std::int64_t m = start;
  // (4.3): b wsum <= a window_sum for eps = a / b.
  while (wsum * eps.get_den() > window_sum * eps.get_num()) {
    ++m;
    window_sum += ipow(2 * m, t);
  }
  return m;
}

InsertionPlan build_plan(const PlanContext& ctx, const PlanBuildOptions& opts) {
  if (opts.horizon < 1) throw Error(ErrorKind::InvalidArgument, "horizon must be >= 1");
  check_subset_sampled(*ctx.U, *ctx.S, opts.horizon);

  InsertionPlan plan;
  plan.field = ctx.S->field();
  plan.S_spec = ctx.S->spec();
  plan.U_spec = ctx.U->spec();
  plan.horizon = opts.horizon;
  plan.t = opts.t > 0 ? opts.t : choose_t(ctx.S_tilde, opts.t_horizon);
  plan.u_deg = build_u_deg(*ctx.U, opts.horizon);

  const DensityProfile profile = poly_density_profile(*ctx.u_minus, *ctx.S, opts.horizon);
  plan.N = choose_nk(profile, opts.count);

  if (!opts.eps.empty() && opts.eps.size() < plan.N.size()) {
    throw Error(ErrorKind::InvalidArgument, "fewer eps values than N_k");
  }
  Degree n_prev = 0;
  std::int64_t m_prev = 0;
  for (std::size_t k = 1; k <= plan.N.size(); ++k) {
    Rational eps = opts.eps.empty() ? Rational(1, static_cast<long>(k + 1)) : opts.eps[k - 1];
    eps.canonicalize();
    std::vector<Poly> w = build_wk(*ctx.u_minus, n_prev, plan.N[k - 1], ctx.u_minus->enumeration_cap());
    const std::int64_t m = choose_mk(w, eps, plan.t, m_prev);
    plan.eps.push_back(eps);
    plan.W.push_back(std::move(w));
    plan.M.push_back(m);
    n_prev = plan.N[k - 1];
    m_prev = m;
  }
  for (std::int64_t n = 1; n <= m_prev + 1; ++n) {
    if (window_count(*ctx.sparse, plan.t, n) == 0) {
      throw Error(ErrorKind::InfeasibleWindow, "seed window " + std::to_string(n) + " is empty");
    }
  }
  validate_plan(plan, ctx);
  return plan;
}

std::vector<PlanCheck> validate_plan(const InsertionPlan& plan, const PlanContext& ctx) {
  auto fail = [](const std::string& why) { return Error(ErrorKind::PlanViolation, why); };
  const std::size_t K = plan.N.size();
  if (plan.eps.size() != K || plan.W.size() != K || plan.M.size() != K) {
    throw fail("eps, N, W and M have different lengths");
  }
  if (plan.field != ctx.S->field()) throw fail("plan field differs from the sources");
  if (plan.S_spec != ctx.S->spec() || plan.U_spec != ctx.U->spec()) {
    throw fail("plan sources differ from the context");
  }
  if (plan.t < 3) throw fail("t must be >= 3");
  if (plan.u_deg != build_u_deg(*ctx.U, plan.horizon)) throw fail("u_deg does not match U");

  std::vector<PlanCheck> checks;
  std::set<Poly> seen;
  for (std::size_t k = 1; k <= K; ++k) {
    const Rational& eps = plan.eps[k - 1];
    const std::string tag = "k = " + std::to_string(k) + ": ";
    if (eps <= 0) throw fail(tag + "eps must be positive");
    if (k > 1 && eps >= plan.eps[k - 2]) throw fail(tag + "eps must decrease");
    const Degree n_prev = k > 1 ? plan.N[k - 2] : 0;
    const std::int64_t m_prev = k > 1 ? plan.M[k - 2] : 0;
    if (plan.N[k - 1] <= n_prev) throw fail(tag + "N must increase");
    if (plan.N[k - 1] > plan.horizon) throw fail(tag + "N_k beyond the horizon");
    if (plan.M[k - 1] <= m_prev) throw fail(tag + "M must increase");

    const std::vector<Poly>& W = plan.W[k - 1];
    if (W != build_wk(*ctx.u_minus, n_prev, plan.N[k - 1], ctx.u_minus->enumeration_cap())) {
      throw fail(tag + "W_k differs from Q_{N_k}(U \\ S*) minus Q_{N_{k-1}}(U \\ S*)");
    }
    for (const Poly& w : W) {
      if (!ctx.U->contains(w)) throw fail(tag + w.to_string() + " is not in U");
      if (ctx.sparse->member(w)) throw fail(tag + w.to_string() + " is in S*");
      if (!seen.insert(w).second) throw fail(tag + w.to_string() + " repeats");
    }

    PlanCheck c;
    c.k = k;
    for (const Poly& w : W) c.w_degree_sum += static_cast<long>(w.degree());
    for (std::int64_t i = m_prev + 1; i <= plan.M[k - 1]; ++i) c.window_sum += ipow(2 * i, plan.t);
    if (!W.empty() && c.w_degree_sum * eps.get_den() > c.window_sum * eps.get_num()) {
      throw fail(tag + "sum of deg w exceeds eps_k times the window sum");
    }

    // Beyond n* the analytic bound applies; every n from M_k up to
    // max(n*, M_k) + 1000 is also checked directly.
    c.n_star = verify_gap_threshold(plan.t, eps);
    c.checked_through = std::max(c.n_star, plan.M[k - 1]) + 1000;
    GapSums sums(plan.t, plan.M[k - 1]);
    while (true) {
      if (!sums.holds(eps)) {
        throw fail(tag + "gap condition fails at n = " + std::to_string(sums.n()));
      }
      if (sums.n() >= c.checked_through) break;
      sums.advance();
    }
    checks.push_back(std::move(c));
  }
  return checks;
}

// ---------------------------------------------------------------------------
// Insertion and elimination

DigitSeq insert_digits(std::span<const Poly> seed, const InsertionPlan& plan, std::size_t horizon) {
  DigitSeq out;
  std::set<Poly> seen;
  auto push = [&](const Poly& p) {
    if (!seen.insert(p).second) {
      throw Error(ErrorKind::PlanViolation, p.to_string().substr(0, 64) + " would appear twice");
    }
    out.push_back(p);
    return out.size() < horizon;
  };
  std::size_t k = 0;
  for (std::size_t i = 1; i <= seed.size() && out.size() < horizon; ++i) {
    if (!push(seed[i - 1])) break;
    if (k < plan.M.size() && plan.M[k] == static_cast<std::int64_t>(i)) {
      for (const Poly& w : plan.W[k]) {
        if (!push(w)) break;
      }
      ++k;
    }
  }
  return out;
}

DigitSeq eliminate(std::span<const Poly> x, const InsertionPlan& plan, std::size_t horizon) {
  const std::size_t n = std::min(horizon, x.size());
  DigitSeq out;
  std::size_t pos = 0;
  std::size_t k = 0;
  while (pos < n) {
    out.push_back(x[pos++]);
    if (k < plan.M.size() && plan.M[k] == static_cast<std::int64_t>(out.size())) {
      for (const Poly& w : plan.W[k]) {
        if (pos == n) break;
        if (x[pos] != w) {
          throw Error(ErrorKind::PlanViolation, "digit " + std::to_string(pos + 1) +
                                                    " should be " + w.to_string() + " from W_" +
                                                    std::to_string(k + 1));
        }
        ++pos;
      }
      ++k;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Diagnostics

namespace {

// Runs body(i) for i in [0, n) on up to `threads` threads.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body body) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned id = 0; id < threads; ++id) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

DigitSeq seed_prefix(const PlanContext& ctx, const SeedSpec& spec, std::int64_t n, unsigned threads) {
  std::vector<std::optional<Poly>> slots(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)));
  parallel_for(slots.size(), threads, [&](std::size_t i) {
    slots[i] = seed_digit(*ctx.sparse, spec, static_cast<std::int64_t>(i) + 1);
  });
  DigitSeq out;
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

HolderReport holder_diagnostic(const InsertionPlan& plan, const PlanContext& ctx,
                               const SeedSpec& spec, std::span<const std::int64_t> depths,
                               std::size_t variants_per_depth, unsigned threads, double tolerance) {
  if (variants_per_depth < 1) throw Error(ErrorKind::InvalidArgument, "need at least one variant");
  std::vector<std::int64_t> ds(depths.begin(), depths.end());
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  HolderReport report;
  report.tolerance = tolerance;
  if (ds.empty()) return report;
  if (ds.front() < 0) throw Error(ErrorKind::InvalidArgument, "depths must be >= 0");
  const SeedSpec seeds_spec{plan.t, spec.policy, spec.seed};
  const DigitSeq seeds = seed_prefix(ctx, seeds_spec, ds.back(), threads);

  struct Task {
    std::int64_t depth;
    std::size_t variant;
    Poly a;
    Poly b;
  };
  std::vector<Task> tasks;
  for (std::int64_t s : ds) {
    const Window w = window(*ctx.sparse, plan.t, s + 1);
    if (w.count < 2) {
      throw Error(ErrorKind::InfeasibleWindow, "window " + std::to_string(s + 1) + " has fewer than two digits");
    }
    const Poly a = window_element(*ctx.sparse, w, Integer(1));
    // Variants spread evenly over the window, in canonical order.
    Integer last(1);
    for (std::size_t v = 1; v <= variants_per_depth; ++v) {
      Integer j = (w.count - 1) * static_cast<unsigned long>(v);
      j /= static_cast<unsigned long>(variants_per_depth);
      j += 1;
      if (j <= last) continue;
      last = j;
      tasks.push_back({s, v, a, window_element(*ctx.sparse, w, j)});
    }
  }

  report.samples.resize(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t i) {
    const Task& task = tasks[i];
    const auto s = static_cast<std::size_t>(task.depth);
    DigitSeq y1(seeds.begin(), seeds.begin() + static_cast<std::ptrdiff_t>(s));
    DigitSeq y2 = y1;
    y1.push_back(task.a);
    y2.push_back(task.b);
    const std::size_t unbounded = static_cast<std::size_t>(-1);
    const DigitSeq x1 = insert_digits(y1, plan, unbounded);
    const DigitSeq x2 = insert_digits(y2, plan, unbounded);
    const QPower dy = point_distance_by_digits(y1, y2, y1.size());
    const QPower dx = point_distance_by_digits(x1, x2, std::max(x1.size(), x2.size()));

    HolderSample& out = report.samples[i];
    out.depth = task.depth;
    out.variant = task.variant;
    out.x_exponent = dx.exponent;
    out.y_exponent = dy.exponent;
    out.exponent = static_cast<double>(dy.exponent) / static_cast<double>(dx.exponent);
    out.k = static_cast<std::size_t>(
        std::upper_bound(plan.M.begin(), plan.M.end(), task.depth) - plan.M.begin());
    out.bound = out.k == 0 ? 1.0 : 1.0 / (1.0 + 2.0 * plan.eps[out.k - 1].get_d());
    out.ok = out.exponent >= out.bound - tolerance;
  });

  for (const HolderSample& sample : report.samples) {
    auto it = std::find_if(report.tiers.begin(), report.tiers.end(),
                           [&](const HolderTier& t) { return t.k == sample.k; });
    if (it == report.tiers.end()) {
      HolderTier tier;
      tier.k = sample.k;
      tier.eps = sample.k == 0 ? Rational(0) : plan.eps[sample.k - 1];
      tier.bound = sample.bound;
      tier.min_exponent = tier.max_exponent = sample.exponent;
      tier.min_separation = sample.x_exponent;
      report.tiers.push_back(tier);
      it = report.tiers.end() - 1;
    }
    HolderTier& tier = *it;
    if (tier.depths.empty() || tier.depths.back() != sample.depth) tier.depths.push_back(sample.depth);
    tier.min_exponent = std::min(tier.min_exponent, sample.exponent);
    tier.max_exponent = std::max(tier.max_exponent, sample.exponent);
    tier.min_separation = std::min(tier.min_separation, sample.x_exponent);
    tier.ok = tier.ok && sample.ok;
  }
  for (HolderTier& tier : report.tiers) {
    double prev = -1.0;
    for (std::int64_t d : tier.depths) {
      double lowest = 2.0;
      for (const HolderSample& s : report.samples) {
        if (s.depth == d) lowest = std::min(lowest, s.exponent);
      }
      if (lowest < prev) tier.nondecreasing = false;
      prev = lowest;
    }
    report.ok = report.ok && tier.ok && tier.nondecreasing;
  }
  return report;
}

}  // namespace lcf
