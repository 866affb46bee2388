#include "laurentcf/seedset.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "laurentcf/error.hpp"

namespace lcf {
namespace {

// k! together with 2! + 3! + ... + (k-1)!, the number of elements of P
// below k!. Entries are extended from the nearest smaller cached k.
struct FactorialEntry {
  Integer fac;
  Integer below;
};

class FactorialCache {
 public:
  FactorialEntry get(std::int64_t k) {
    std::lock_guard lock(mutex_);
    auto it = table_.upper_bound(k);
    --it;
    if (it->first == k) return it->second;
    Integer fac = it->second.fac;
    Integer below = it->second.below;
    for (std::int64_t j = it->first; j < k; ++j) {
      below += fac;
      fac *= static_cast<unsigned long>(j + 1);
    }
    return table_.emplace(k, FactorialEntry{fac, below}).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::int64_t, FactorialEntry> table_{{2, {Integer(2), Integer(0)}}};
};

FactorialCache& factorials() {
  static FactorialCache cache;
  return cache;
}

Integer factorial(std::int64_t k) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
  return f;
}

std::int64_t checked_power(std::int64_t base, int t) {
  Integer v = pow(static_cast<std::uint64_t>(base), static_cast<std::uint64_t>(t));
  if (!v.fits_slong_p()) {
    throw Error(ErrorKind::CapExceeded, "window degree " + std::to_string(base) + "^" +
                                            std::to_string(t) + " overflows");
  }
  return v.get_si();
}

// Degree limit for windows of unbounded sources; beyond it a single rank
// has tens of megabytes.
constexpr Degree kMaxWindowDegree = Degree{1} << 22;

}  // namespace

std::int64_t mu(const Integer& T) {
  if (T < 1) throw Error(ErrorKind::InvalidArgument, "mu is defined for T >= 1");
  // Start from the Stirling estimate, then correct with exact factorials.
  const double target = log2(T);
  auto lf = [](double k) { return std::lgamma(k + 1.0) / std::log(2.0); };
  std::int64_t hi = 2;
  while (lf(static_cast<double>(hi)) <= target) hi *= 2;
  std::int64_t lo = 1;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo + 1) / 2;
    if (lf(static_cast<double>(mid)) <= target) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  std::int64_t k = std::max<std::int64_t>(lo, 1);
  Integer f = factorial(k);
  while (f > T) {
    f /= static_cast<unsigned long>(k);
    --k;
  }
  while (true) {
    Integer next = f * static_cast<unsigned long>(k + 1);
    if (next > T) break;
    f = std::move(next);
    ++k;
  }
  return k;
}

bool member_P(const Integer& n) {
  if (n < 2) return false;
  const std::int64_t k = mu(n);
  const FactorialEntry e = factorials().get(k);
  Integer off = n - e.fac;
  return mpz_divisible_ui_p(off.get_mpz_t(), static_cast<unsigned long>(k)) != 0;
}

Integer count_P(const Integer& T) {
  if (T < 2) return Integer(0);
  const std::int64_t k = mu(T);
  const FactorialEntry e = factorials().get(k);
  Integer within = T - e.fac;
  within /= static_cast<unsigned long>(k);
  within += 1;
  return e.below + within;
}

Integer nth_P(const Integer& m) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "P is indexed from 1");
  // The block k holding the m-th element has below(k) < m <= below(k+1),
  // and below(mu(m)) < mu(m)! <= m, so the search starts at mu(m).
  std::int64_t k = std::max<std::int64_t>(2, mu(m));
  while (factorials().get(k + 1).below < m) ++k;
  const FactorialEntry e = factorials().get(k);
  Integer i = m - e.below - 1;
  i *= static_cast<unsigned long>(k);
  return e.fac + i;
}

Integer next_P(const Integer& n) {
  Integer c = count_P(n);
  c += 1;
  return nth_P(c);
}

// ---------------------------------------------------------------------------

bool SparseSubset::member(const Poly& p) const {
  if (!base_->contains(p)) return false;
  return member_P(base_->source_rank(p));
}

Integer SparseSubset::count_through(Degree N) const { return count_P(base_->cumulative_count(N)); }

std::vector<Poly> SparseSubset::members_of_degree(Degree d, std::uint64_t cap) const {
  if (d < 1) return {};
  const Integer lo = base_->cumulative_count(d - 1);
  const Integer before = count_P(lo);
  const Integer n = count_P(base_->cumulative_count(d)) - before;
  if (n > cap) {
    throw Error(ErrorKind::CapExceeded, "S* has " + to_decimal(n) + " elements of degree " +
                                            std::to_string(d) + ", cap is " + std::to_string(cap));
  }
  std::vector<Poly> out;
  for (unsigned long j = 1; j <= n.get_ui(); ++j) {
    Integer r = nth_P(before + j);
    r -= lo;
    out.push_back(base_->unrank_within_degree(d, r));
  }
  return out;
}

Degree window_lo(int t, std::int64_t n) { return checked_power(2 * n, t); }
Degree window_hi(int t, std::int64_t n) { return checked_power(2 * n + 1, t); }

Window window(const SparseSubset& sparse, int t, std::int64_t n) {
  if (t < 3) throw Error(ErrorKind::InvalidArgument, "t must be >= 3");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "windows are indexed from 1");
  Window w;
  w.n = n;
  w.deg_lo = window_lo(t, n);
  w.deg_hi = window_hi(t, n);
  const auto bound = sparse.base().max_degree();
  if (!bound && w.deg_hi > kMaxWindowDegree) {
    throw Error(ErrorKind::CapExceeded, "window " + std::to_string(n) + " reaches degree " +
                                            std::to_string(w.deg_hi));
  }
  w.rank_lo = sparse.base().cumulative_count(w.deg_lo - 1);
  w.rank_hi = sparse.base().cumulative_count(w.deg_hi - 1);
  w.count = count_P(w.rank_hi) - count_P(w.rank_lo);
  return w;
}

Integer window_count(const SparseSubset& sparse, int t, std::int64_t n) {
  return window(sparse, t, n).count;
}

std::vector<Window> window_table(const SparseSubset& sparse, int t, std::int64_t n_max,
                                 unsigned threads) {
  std::vector<Window> out(static_cast<std::size_t>(std::max<std::int64_t>(n_max, 0)));
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(out.size())));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned id) {
    try {
      for (std::size_t i = id; i < out.size(); i += threads) {
        out[i] = window(sparse, t, static_cast<std::int64_t>(i) + 1);
      }
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned id = 0; id < threads; ++id) pool.emplace_back(work, id);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

int choose_t(const SourcePtr& source, std::int64_t horizon, int t_cap) {
  if (horizon < 1) throw Error(ErrorKind::InvalidArgument, "horizon must be >= 1");
  const SparseSubset sparse(source);
  for (int t = 3; t <= t_cap; ++t) {
    bool ok = true;
    try {
      for (std::int64_t n = 1; n <= horizon && ok; ++n) ok = window_count(sparse, t, n) > 0;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CapExceeded) throw;
      break;
    }
    if (ok) return t;
  }
  throw Error(ErrorKind::SearchExhausted, "no t in [3, " + std::to_string(t_cap) +
                                              "] gives nonempty windows through n = " +
                                              std::to_string(horizon) + " for " + source->spec());
}

Poly window_element(const SparseSubset& sparse, const Window& w, const Integer& j) {
  if (j < 1 || j > w.count) {
    throw Error(ErrorKind::InfeasibleWindow, "window " + std::to_string(w.n) + " has " +
                                                 to_decimal(w.count) + " elements, asked for " +
                                                 to_decimal(j));
  }
  return sparse.base().source_unrank(nth_P(count_P(w.rank_lo) + j));
}

Poly seed_digit(const SparseSubset& sparse, const SeedSpec& spec, std::int64_t n) {
  const Window w = window(sparse, spec.t, n);
  if (w.count == 0) {
    throw Error(ErrorKind::InfeasibleWindow, "window " + std::to_string(n) + " of S* is empty");
  }
  Integer j(1);
  if (spec.policy == DigitPolicy::SeededRandom) {
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(static_cast<unsigned long>(spec.seed * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(n)));
    j = rng.get_z_range(w.count);
    j += 1;
  }
  return window_element(sparse, w, j);
}

DigitStream seed_stream(std::shared_ptr<const SparseSubset> sparse, SeedSpec spec) {
  const PrimeField field = sparse->base().field();
  return DigitStream(field, [sparse = std::move(sparse), spec](std::size_t n) -> std::optional<Poly> {
    return seed_digit(*sparse, spec, static_cast<std::int64_t>(n));
  });
}

Rational measure_weight(std::span<const Window> windows, std::int64_t n) {
  if (n < 1 || static_cast<std::size_t>(n) > windows.size()) {
    throw Error(ErrorKind::InvalidArgument, "measure weight needs windows 1.." + std::to_string(n));
  }
  Integer den(1);
  for (std::int64_t j = 0; j < n; ++j) {
    const Integer& c = windows[static_cast<std::size_t>(j)].count;
    if (c == 0) throw Error(ErrorKind::InfeasibleWindow, "window " + std::to_string(j + 1) + " is empty");
    den *= c;
  }
  return Rational(Integer(1), den);
}

std::vector<double> local_dim_profile(std::span<const Window> windows,
                                      std::span<const Degree> digit_degrees, std::uint32_t q) {
  const std::size_t n = std::min(windows.size(), digit_degrees.size());
  std::vector<double> out;
  double log_count = 0.0;
  Degree deg_sum = 0;
  const double lq = std::log2(static_cast<double>(q));
  for (std::size_t j = 0; j < n; ++j) {
    if (windows[j].count == 0) {
      throw Error(ErrorKind::InfeasibleWindow, "window " + std::to_string(j + 1) + " is empty");
    }
    log_count += log2(windows[j].count);
    deg_sum += digit_degrees[j];
    out.push_back(log_count / ((2.0 * static_cast<double>(deg_sum) + 1.0) * lq));
  }
  return out;
}

MeasureBoundFit fit_measure_bound(std::span<const Window> windows, int t, std::uint32_t q,
                                  double alpha) {
  if (windows.size() < 2) throw Error(ErrorKind::DegenerateWindow, "need at least two windows");
  const double lq = std::log2(static_cast<double>(q));
  std::vector<double> xs;
  std::vector<double> ys;
  for (const Window& w : windows) {
    if (w.count == 0) throw Error(ErrorKind::InfeasibleWindow, "window " + std::to_string(w.n) + " is empty");
    const double e = std::pow(static_cast<double>(2 * w.n + 1), t);
    xs.push_back(std::log2(static_cast<double>(w.n)));
    ys.push_back(log2(w.count) - e / alpha * lq);
  }
  const auto m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  MeasureBoundFit fit;
  fit.alpha = alpha;
  fit.rho = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
  double lowest = ys[0] + fit.rho * xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) lowest = std::min(lowest, ys[i] + fit.rho * xs[i]);
  constexpr double kGrain = 1048576.0;  // 2^20
  fit.log2_c0 = std::floor(lowest * kGrain) / kGrain;
  return fit;
}

double measure_bound_log2(const MeasureBoundFit& fit, int t, std::uint32_t q, std::int64_t n) {
  const double lq = std::log2(static_cast<double>(q));
  double sum = 0.0;
  for (std::int64_t j = 1; j <= n; ++j) sum += std::pow(static_cast<double>(2 * j + 1), t);
  const double log2_nfact = std::lgamma(static_cast<double>(n) + 1.0) / std::log(2.0);
  return fit.rho * log2_nfact - static_cast<double>(n) * fit.log2_c0 - sum / fit.alpha * lq;
}

}  // namespace lcf
