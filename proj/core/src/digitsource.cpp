#include "laurentcf/digitsource.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include "laurentcf/error.hpp"

namespace lcf {

// ---------------------------------------------------------------------------
// DigitSource defaults

Integer DigitSource::count_by_degree(Degree d) const {
  if (d < 1) return Integer(0);
  if (closed_form_unrank()) return compute_count(d);
  {
    std::shared_lock lock(mutex_);
    if (auto it = counts_.find(d); it != counts_.end()) return it->second;
  }
  Integer c = compute_count(d);
  std::unique_lock lock(mutex_);
  counts_.emplace(d, c);
  return c;
}

Integer DigitSource::cumulative_count(Degree N) const {
  if (N < 1) return Integer(0);
  std::size_t start = 0;
  Integer acc;
  {
    std::shared_lock lock(mutex_);
    if (static_cast<std::size_t>(N) < prefix_.size()) return prefix_[static_cast<std::size_t>(N)];
    start = prefix_.size();
    if (start > 0) acc = prefix_.back();
  }
  std::vector<Integer> ext;
  if (start == 0) {
    ext.emplace_back(0);
    start = 1;
  }
  for (auto d = static_cast<Degree>(start); d <= N; ++d) {
    acc += count_by_degree(d);
    ext.push_back(acc);
  }
  // ext covers indices [base, N]. Another thread may have extended the
  // table meanwhile; the values agree, so only the missing tail is added.
  std::unique_lock lock(mutex_);
  const std::size_t base = static_cast<std::size_t>(N) + 1 - ext.size();
  for (std::size_t i = prefix_.size(); i <= static_cast<std::size_t>(N); ++i) {
    prefix_.push_back(ext[i - base]);
  }
  return acc;
}

void DigitSource::preload_counts(const std::map<Degree, Integer>& counts) const {
  for (const auto& [d, c] : counts) {
    if (d < 1 || c < 0) throw Error(ErrorKind::InvalidArgument, "bad count entry for degree " + std::to_string(d));
    if (closed_form_counts() && compute_count(d) != c) {
      throw Error(ErrorKind::InvalidArgument, "cached count for degree " + std::to_string(d) +
                                                  " disagrees with " + spec());
    }
  }
  if (closed_form_counts()) return;
  std::unique_lock lock(mutex_);
  for (const auto& [d, c] : counts) counts_.insert_or_assign(d, c);
  prefix_.clear();
}

bool DigitSource::has_degree(Degree d) const { return count_by_degree(d) > 0; }

Integer DigitSource::present_degree_count(Degree N) const {
  Integer n;
  for (Degree d = 1; d <= N; ++d) {
    if (has_degree(d)) ++n;
  }
  return n;
}

std::vector<Poly> DigitSource::filtered_degree(Degree d) const {
  std::vector<Poly> out;
  for (Poly& p : enumerate_degree(field_, d, cap_)) {
    if (contains(p)) out.push_back(std::move(p));
  }
  return out;
}

Integer DigitSource::compute_count(Degree d) const {
  return Integer(static_cast<unsigned long>(filtered_degree(d).size()));
}

Integer DigitSource::rank_within_degree(const Poly& p) const {
  const std::vector<Poly> members = filtered_degree(p.degree());
  const auto it = std::lower_bound(members.begin(), members.end(), p);
  if (it == members.end() || *it != p) {
    throw Error(ErrorKind::NotMember, p.to_string() + " is not in " + spec());
  }
  return Integer(static_cast<unsigned long>(it - members.begin() + 1));
}

Poly DigitSource::unrank_within_degree(Degree d, const Integer& r) const {
  const std::vector<Poly> members = filtered_degree(d);
  if (r < 1 || r > static_cast<unsigned long>(members.size())) {
    throw Error(ErrorKind::OutOfDomain, "rank " + to_decimal(r) + " outside degree " +
                                            std::to_string(d) + " of " + spec());
  }
  return members[r.get_ui() - 1];
}

std::optional<Poly> DigitSource::min_of_degree(Degree d) const {
  if (d < 1) return std::nullopt;
  if (count_degree(field_, d) > cap_) {
    throw Error(ErrorKind::CapExceeded, "minimum of degree " + std::to_string(d) + " of " +
                                            spec() + " needs enumeration past the cap");
  }
  DegreeEnumerator e(field_, d);
  while (auto p = e.next()) {
    if (contains(*p)) return p;
  }
  return std::nullopt;
}

std::vector<Poly> DigitSource::members_of_degree(Degree d, std::uint64_t cap) const {
  if (d < 1) return {};
  const Integer n = count_by_degree(d);
  if (n > cap) {
    throw Error(ErrorKind::CapExceeded, "degree " + std::to_string(d) + " of " + spec() +
                                            " has " + to_decimal(n) + " elements, cap is " +
                                            std::to_string(cap));
  }
  if (!closed_form_unrank()) return filtered_degree(d);
  std::vector<Poly> out;
  for (unsigned long r = 1; r <= n.get_ui(); ++r) out.push_back(unrank_within_degree(d, Integer(r)));
  return out;
}

Integer DigitSource::source_rank(const Poly& p) const {
  if (p.field() != field_) throw Error(ErrorKind::FieldMismatch, "polynomial over another field");
  if (!contains(p)) throw Error(ErrorKind::NotMember, p.to_string() + " is not in " + spec());
  Integer r = cumulative_count(p.degree() - 1);
  r += rank_within_degree(p);
  return r;
}

Poly DigitSource::source_unrank(const Integer& r) const {
  if (r < 1) throw Error(ErrorKind::OutOfDomain, "source rank must be >= 1");
  const auto bound = max_degree();
  Degree hi = 1;
  while (cumulative_count(hi) < r) {
    if (bound && hi >= *bound) {
      throw Error(ErrorKind::OutOfDomain, "rank " + to_decimal(r) + " exceeds the size of " + spec());
    }
    hi *= 2;
    if (bound) hi = std::min(hi, *bound);
  }
  Degree lo = 1;
  while (lo < hi) {
    const Degree mid = lo + (hi - lo) / 2;
    if (cumulative_count(mid) >= r) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  Integer within = r;
  within -= cumulative_count(lo - 1);
  return unrank_within_degree(lo, within);
}

// ---------------------------------------------------------------------------
// Closed-form sources

namespace {

Integer qpow(const PrimeField& f, Degree e) {
  return pow(f.q(), static_cast<std::uint64_t>(std::max<Degree>(e, 0)));
}

void check_within(const Integer& r, const Integer& n, Degree d, const DigitSource& s) {
  if (r < 1 || r > n) {
    throw Error(ErrorKind::OutOfDomain, "rank " + to_decimal(r) + " outside degree " +
                                            std::to_string(d) + " of " + s.spec());
  }
}

void check_member(const DigitSource& s, const Poly& p) {
  if (!s.contains(p)) throw Error(ErrorKind::NotMember, p.to_string() + " is not in " + s.spec());
}

}  // namespace

Integer FullSource::compute_count(Degree d) const { return count_degree(field(), d); }

Integer FullSource::cumulative_count(Degree N) const {
  if (N < 1) return Integer(0);
  Integer n = qpow(field(), N + 1);
  n -= field().q();
  return n;
}

Integer FullSource::present_degree_count(Degree N) const { return Integer(std::max<Degree>(N, 0)); }

Integer FullSource::rank_within_degree(const Poly& p) const {
  check_member(*this, p);
  Integer r = p.value();
  r -= qpow(field(), p.degree());
  r += 1;
  return r;
}

Poly FullSource::unrank_within_degree(Degree d, const Integer& r) const {
  check_within(r, count_by_degree(d), d, *this);
  Integer v = qpow(field(), d);
  v += r;
  v -= 1;
  return Poly::from_value(field(), v);
}

std::optional<Poly> FullSource::min_of_degree(Degree d) const {
  if (d < 1) return std::nullopt;
  return Poly::monomial(field(), d);
}

Integer MonicSource::compute_count(Degree d) const { return qpow(field(), d); }

Integer MonicSource::cumulative_count(Degree N) const {
  if (N < 1) return Integer(0);
  Integer n = qpow(field(), N + 1);
  n -= field().q();
  n /= field().q() - 1;
  return n;
}

Integer MonicSource::present_degree_count(Degree N) const { return Integer(std::max<Degree>(N, 0)); }

Integer MonicSource::rank_within_degree(const Poly& p) const {
  check_member(*this, p);
  Integer r = p.value();
  r -= qpow(field(), p.degree());
  r += 1;
  return r;
}

Poly MonicSource::unrank_within_degree(Degree d, const Integer& r) const {
  check_within(r, count_by_degree(d), d, *this);
  Integer v = qpow(field(), d);
  v += r;
  v -= 1;
  return Poly::from_value(field(), v);
}

std::optional<Poly> MonicSource::min_of_degree(Degree d) const {
  if (d < 1) return std::nullopt;
  return Poly::monomial(field(), d);
}

Integer ZeroConstantSource::compute_count(Degree d) const {
  Integer n = qpow(field(), d - 1);
  n *= field().q() - 1;
  return n;
}

Integer ZeroConstantSource::cumulative_count(Degree N) const {
  if (N < 1) return Integer(0);
  Integer n = qpow(field(), N);
  n -= 1;
  return n;
}

Integer ZeroConstantSource::present_degree_count(Degree N) const {
  return Integer(std::max<Degree>(N, 0));
}

// A = X B with deg B = d - 1, and value(A) = q value(B).
Integer ZeroConstantSource::rank_within_degree(const Poly& p) const {
  check_member(*this, p);
  Integer r = p.value();
  r /= field().q();
  r -= qpow(field(), p.degree() - 1);
  r += 1;
  return r;
}

Poly ZeroConstantSource::unrank_within_degree(Degree d, const Integer& r) const {
  check_within(r, count_by_degree(d), d, *this);
  Integer v = qpow(field(), d - 1);
  v += r;
  v -= 1;
  v *= field().q();
  return Poly::from_value(field(), v);
}

std::optional<Poly> ZeroConstantSource::min_of_degree(Degree d) const {
  if (d < 1) return std::nullopt;
  return Poly::monomial(field(), d);
}

bool IrreducibleSource::contains(const Poly& p) const {
  if (p.degree() < 1) return false;
  if (monic_only_ && !p.is_monic()) return false;
  return is_irreducible(p);
}

Integer IrreducibleSource::compute_count(Degree d) const {
  return count_irreducible(field(), d, monic_only_);
}

Integer IrreducibleSource::present_degree_count(Degree N) const {
  return Integer(std::max<Degree>(N, 0));
}

std::optional<Poly> IrreducibleSource::min_of_degree(Degree d) const {
  if (d < 1) return std::nullopt;
  // Irreducibles are dense enough that a linear scan from X^d is short.
  DegreeEnumerator e(field(), d);
  while (auto p = e.next()) {
    if (contains(*p)) return p;
  }
  return std::nullopt;
}

ExplicitSource::ExplicitSource(PrimeField field, std::vector<Poly> members)
    : DigitSource(field), members_(std::move(members)) {
  for (const Poly& p : members_) {
    if (p.field() != field) throw Error(ErrorKind::FieldMismatch, "explicit member over another field");
    if (p.degree() < 1) {
      throw Error(ErrorKind::OutOfDomain, "explicit member " + p.to_string() + " has degree < 1");
    }
  }
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

std::string ExplicitSource::spec() const {
  std::string s = "explicit:";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) s += ';';
    s += members_[i].to_string();
  }
  return s;
}

bool ExplicitSource::contains(const Poly& p) const {
  return std::binary_search(members_.begin(), members_.end(), p);
}

namespace {

// Members are sorted by degree first, so each degree is a contiguous run.
auto degree_range(const std::vector<Poly>& v, Degree d) {
  const auto lo = std::partition_point(v.begin(), v.end(), [d](const Poly& p) { return p.degree() < d; });
  const auto hi = std::partition_point(lo, v.end(), [d](const Poly& p) { return p.degree() <= d; });
  return std::pair{lo, hi};
}

}  // namespace

Integer ExplicitSource::compute_count(Degree d) const {
  const auto [lo, hi] = degree_range(members_, d);
  return Integer(static_cast<unsigned long>(hi - lo));
}

Integer ExplicitSource::cumulative_count(Degree N) const {
  const auto it = std::partition_point(members_.begin(), members_.end(),
                                       [N](const Poly& p) { return p.degree() <= N; });
  return Integer(static_cast<unsigned long>(it - members_.begin()));
}

bool ExplicitSource::has_degree(Degree d) const {
  const auto [lo, hi] = degree_range(members_, d);
  return lo != hi;
}

Integer ExplicitSource::present_degree_count(Degree N) const {
  Integer n;
  Degree last = 0;
  for (const Poly& p : members_) {
    if (p.degree() > N) break;
    if (p.degree() != last) {
      ++n;
      last = p.degree();
    }
  }
  return n;
}

std::optional<Degree> ExplicitSource::max_degree() const {
  return members_.empty() ? Degree{0} : members_.back().degree();
}

Integer ExplicitSource::rank_within_degree(const Poly& p) const {
  check_member(*this, p);
  const auto [lo, hi] = degree_range(members_, p.degree());
  return Integer(static_cast<unsigned long>(std::lower_bound(lo, hi, p) - lo + 1));
}

Poly ExplicitSource::unrank_within_degree(Degree d, const Integer& r) const {
  const auto [lo, hi] = degree_range(members_, d);
  check_within(r, Integer(static_cast<unsigned long>(hi - lo)), d, *this);
  return *(lo + static_cast<std::ptrdiff_t>(r.get_ui() - 1));
}

std::optional<Poly> ExplicitSource::min_of_degree(Degree d) const {
  const auto [lo, hi] = degree_range(members_, d);
  if (lo == hi) return std::nullopt;
  return *lo;
}

std::vector<Poly> ExplicitSource::members_of_degree(Degree d, std::uint64_t cap) const {
  const auto [lo, hi] = degree_range(members_, d);
  if (static_cast<std::uint64_t>(hi - lo) > cap) {
    throw Error(ErrorKind::CapExceeded, "explicit degree " + std::to_string(d) + " exceeds the cap");
  }
  return {lo, hi};
}

PredicateSource::PredicateSource(PrimeField field, std::string name,
                                 std::function<bool(const Poly&)> pred, Degree degree_cap)
    : DigitSource(field), name_(std::move(name)), pred_(std::move(pred)), degree_cap_(degree_cap) {}

bool PredicateSource::contains(const Poly& p) const { return p.degree() >= 1 && pred_(p); }

Integer PredicateSource::compute_count(Degree d) const {
  if (d > degree_cap_) {
    throw Error(ErrorKind::CapExceeded, "predicate source '" + name_ + "' counts only through degree " +
                                            std::to_string(degree_cap_));
  }
  return DigitSource::compute_count(d);
}

// ---------------------------------------------------------------------------

namespace {

std::shared_ptr<DigitSource> new_source(PrimeField field, std::string_view spec) {
  if (spec == "full") return std::make_shared<FullSource>(field);
  if (spec == "irreducible") return std::make_shared<IrreducibleSource>(field, false);
  if (spec == "irreducible_monic") return std::make_shared<IrreducibleSource>(field, true);
  if (spec == "monic") return std::make_shared<MonicSource>(field);
  if (spec == "zero_constant") return std::make_shared<ZeroConstantSource>(field);
  constexpr std::string_view kExplicit = "explicit:";
  if (spec.starts_with(kExplicit)) {
    std::vector<Poly> members;
    std::string_view rest = spec.substr(kExplicit.size());
    while (!rest.empty()) {
      const auto cut = rest.find(';');
      const std::string_view item = rest.substr(0, cut);
      if (!item.empty()) members.push_back(parse_poly(field, item));
      if (cut == std::string_view::npos) break;
      rest.remove_prefix(cut + 1);
    }
    return std::make_shared<ExplicitSource>(field, std::move(members));
  }
  throw Error(ErrorKind::ParseError, "unknown digit source '" + std::string(spec) + "'");
}

}  // namespace

SourcePtr make_source(PrimeField field, std::string_view spec, std::uint64_t cap) {
  auto s = new_source(field, spec);
  s->set_enumeration_cap(cap);
  return s;
}

// ---------------------------------------------------------------------------
// Profiles and fits

ConvergenceProfile convergence_profile(const DigitSource& s, Degree n_max) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");
  ConvergenceProfile out;
  const double lq = std::log2(static_cast<double>(s.field().q()));
  bool any_tail = false;
  for (Degree d = 1; d <= n_max; ++d) {
    const Integer D = s.count_by_degree(d);
    if (D == 0) continue;
    const double r = log2(D) / (2.0 * static_cast<double>(d) * lq);
    out.ratios.emplace_back(d, r);
    if (2 * d > n_max) {
      out.tail_max = any_tail ? std::max(out.tail_max, r) : r;
      any_tail = true;
    }
  }
  return out;
}

namespace {

// Nearest rational with denominator at most 4.
double nearest_small_rational(double x) {
  double best = std::round(x);
  for (int den = 2; den <= 4; ++den) {
    const double c = std::round(x * den) / den;
    if (std::abs(c - x) < std::abs(best - x)) best = c;
  }
  return best;
}

// Solves the 3x3 system m v = b by Gaussian elimination with pivoting.
bool solve3(std::array<std::array<double, 4>, 3> m, std::array<double, 3>& v) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (std::abs(m[piv][col]) < 1e-12) return false;
    std::swap(m[piv], m[col]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  for (int i = 0; i < 3; ++i) v[i] = m[i][3] / m[i][i];
  return true;
}

}  // namespace

GrowthFit fit_growth(const DigitSource& s, Degree n_min, Degree n_max) {
  auto degenerate = [&](const std::string& why) {
    return Error(ErrorKind::DegenerateWindow, "growth fit on [" + std::to_string(n_min) + ", " +
                                                  std::to_string(n_max) + "]: " + why);
  };
  if (n_min < 1 || n_max - n_min + 1 < 4) throw degenerate("fewer than 4 points");
  const double lq = std::log(static_cast<double>(s.field().q()));

  std::vector<double> xs;
  std::vector<double> ys;
  Integer first;
  bool grows = false;
  for (Degree N = n_min; N <= n_max; ++N) {
    const Integer c = s.cumulative_count(N);
    if (c == 0) throw degenerate("#Q_N vanishes at N = " + std::to_string(N));
    if (N == n_min) {
      first = c;
    } else if (c != first) {
      grows = true;
    }
    xs.push_back(static_cast<double>(N));
    ys.push_back(log(c));
  }
  if (!grows) throw degenerate("#Q_N is constant");

  // Stage 1: y = a N log q - beta log N + c.
  std::array<std::array<double, 4>, 3> m{};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::array<double, 3> row{xs[i] * lq, -std::log(xs[i]), 1.0};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] += row[r] * row[c];
      m[r][3] += row[r] * ys[i];
    }
  }
  std::array<double, 3> v{};
  if (!solve3(m, v) || v[0] <= 0.0) throw degenerate("no exponential growth");

  GrowthFit fit;
  fit.n_min = n_min;
  fit.n_max = n_max;
  fit.alpha_raw = 1.0 / v[0];
  fit.beta_raw = v[1];
  fit.alpha = fit.alpha_raw;
  const double snap_a = nearest_small_rational(fit.alpha_raw);
  if (snap_a > 0 && std::abs(fit.alpha_raw - snap_a) <= 0.02 * snap_a) {
    fit.alpha = snap_a;
    fit.alpha_snapped = true;
  }
  fit.alpha = std::max(fit.alpha, 1.0);

  // Stage 2: with alpha fixed, y - (N / alpha) log q = -beta log N + c.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = std::log(xs[i]);
    const double y = ys[i] - xs[i] / fit.alpha * lq;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double beta = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double snap_b = nearest_small_rational(beta);
  // Lower-order terms bias the slope by about 1 / N on short windows.
  if (std::abs(beta - snap_b) <= 0.1) {
    beta = snap_b;
    fit.beta_snapped = true;
  }
  fit.beta = std::max(beta, 0.0);

  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double g = std::exp(ys[i] + fit.beta * std::log(xs[i]) - xs[i] / fit.alpha * lq);
    if (i == 0) {
      fit.gamma_lo = fit.gamma_hi = g;
    } else {
      fit.gamma_lo = std::min(fit.gamma_lo, g);
      fit.gamma_hi = std::max(fit.gamma_hi, g);
    }
  }
  return fit;
}

}  // namespace lcf
