#include "laurentcf/cfcore.hpp"

#include <algorithm>

#include "laurentcf/error.hpp"

namespace lcf {

void check_digits(std::span<const Poly> digits) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i].degree() < 1) {
      throw Error(ErrorKind::OutOfDomain, "digit " + std::to_string(i + 1) + " (" +
                                              digits[i].to_string() + ") has degree < 1");
    }
  }
}

Degree degree_sum(std::span<const Poly> digits) {
  Degree s = 0;
  for (const Poly& a : digits) s += a.degree();
  return s;
}

const DigitSeq& DigitStream::prefix(std::size_t n) {
  while (!ended_ && cache_.size() < n) {
    auto next = gen_(cache_.size() + 1);
    if (!next) {
      ended_ = true;
      break;
    }
    if (next->degree() < 1) throw Error(ErrorKind::OutOfDomain, "generator produced a constant digit");
    cache_.push_back(std::move(*next));
  }
  return cache_;
}

ConvergentAccumulator::ConvergentAccumulator(PrimeField field)
    : cur_{Poly(field), Poly::constant(field, 1)},
      prev_{Poly::constant(field, 1), Poly(field)} {}

void ConvergentAccumulator::push(const Poly& digit) {
  ConvergentPair next{digit * cur_.p + prev_.p, digit * cur_.q + prev_.q};
  prev_ = std::move(cur_);
  cur_ = std::move(next);
  ++n_;
}

DigitSeq cf_expand_rational(const RationalFunction& r) {
  if (r.is_zero()) return {};
  if (r.degree() >= 0) {
    throw Error(ErrorKind::OutOfDomain, r.to_string() + " is not in the unit disc");
  }
  DigitSeq out;
  Poly a = r.num();
  Poly b = r.den();
  while (!a.is_zero()) {
    DivMod dm = divmod(b, a);
    out.push_back(std::move(dm.quotient));
    b = std::move(a);
    a = std::move(dm.remainder);
  }
  return out;
}

namespace {

// The truncation of x through its known window as num / X^m.
RationalFunction truncation(const LaurentSeries& x) {
  const PrimeField f = x.field();
  const Degree m = std::max<Degree>(x.known_through(), 0);
  if (!x.has_leading_term()) return RationalFunction(Poly(f), Poly::constant(f, 1));
  std::vector<std::uint32_t> c(static_cast<std::size_t>(x.lead_exp() + m) + 1);
  for (Degree e = x.lead_exp(); e >= -m; --e) c[static_cast<std::size_t>(e + m)] = x.coeff(e);
  return RationalFunction(Poly::from_coefficients(f, c), Poly::monomial(f, m));
}

}  // namespace

CertifiedDigits cf_digits_certified(const LaurentSeries& x, std::size_t max_digits) {
  if (x.has_leading_term() && x.lead_exp() >= 0) {
    throw Error(ErrorKind::OutOfDomain, "series is not in the unit disc");
  }
  // Every series agreeing with x through m lies in the ball of radius
  // q^-(m+1) around the truncation r. A cylinder is a disc of diameter
  // q^(-2 sum deg - 1), so once that is at least the ball radius the digits
  // of r are the digits of every such series.
  CertifiedDigits out;
  const RationalFunction r = truncation(x);
  const bool exact = x.is_exact();
  const Degree m = x.known_through();
  Poly a = r.num();
  Poly b = r.den();
  Degree sum = 0;
  while (!a.is_zero() && out.digits.size() < max_digits) {
    DivMod dm = divmod(b, a);
    const Degree d = dm.quotient.degree();
    if (!exact && 2 * (sum + d) + 1 > m) break;
    sum += d;
    out.digits.push_back(std::move(dm.quotient));
    b = std::move(a);
    a = std::move(dm.remainder);
  }
  out.certified_count = out.digits.size();
  if (a.is_zero()) {
    out.terminated = true;
  } else if (!exact) {
    // T^n x is known only up to q^(2 sum - m - 1); its norm is q^-(deg b - deg a).
    out.terminated = b.degree() - a.degree() > m - 2 * sum;
  }
  return out;
}

std::vector<ConvergentPair> convergents(std::span<const Poly> digits, std::size_t n) {
  if (n > digits.size()) {
    throw Error(ErrorKind::InvalidArgument, "requested " + std::to_string(n) +
                                                " convergents from " +
                                                std::to_string(digits.size()) + " digits");
  }
  check_digits(digits.first(n));
  std::vector<ConvergentPair> out;
  if (n == 0) return out;
  ConvergentAccumulator acc(digits[0].field());
  for (std::size_t i = 0; i < n; ++i) {
    acc.push(digits[i]);
    out.push_back(acc.current());
  }
  return out;
}

RationalFunction cf_value(const PrimeField& field, std::span<const Poly> digits) {
  check_digits(digits);
  ConvergentAccumulator acc(field);
  for (const Poly& a : digits) acc.push(a);
  return RationalFunction(acc.current().p, acc.current().q);
}

QPower cylinder_diameter(std::span<const Poly> prefix) {
  if (prefix.empty()) throw Error(ErrorKind::InvalidArgument, "empty cylinder prefix");
  check_digits(prefix);
  return QPower::of(-2 * degree_sum(prefix) - 1);
}

bool cylinder_contains(std::span<const Poly> prefix, const LaurentSeries& x) {
  check_digits(prefix);
  if (x.has_leading_term() && x.lead_exp() >= 0) return false;
  const CertifiedDigits cd = cf_digits_certified(x, prefix.size());
  for (std::size_t i = 0; i < cd.certified_count; ++i) {
    if (cd.digits[i] != prefix[i]) return false;
  }
  if (cd.certified_count >= prefix.size()) return true;
  if (cd.terminated && x.is_exact()) return false;
  throw Error(ErrorKind::PrecisionExhausted,
              "only " + std::to_string(cd.certified_count) + " of " +
                  std::to_string(prefix.size()) + " digits can be certified");
}

std::optional<std::size_t> first_divergence(std::span<const Poly> a, std::span<const Poly> b,
                                            std::size_t horizon) {
  const std::size_t n = std::min({a.size(), b.size(), horizon});
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return i + 1;
  }
  return std::nullopt;
}

QPower point_distance_by_digits(std::span<const Poly> a, std::span<const Poly> b,
                                std::size_t horizon) {
  const auto m = first_divergence(a, b, horizon);
  if (!m) {
    if (std::min(a.size(), b.size()) >= horizon) {
      throw Error(ErrorKind::NoDivergence,
                  "digit sequences agree through the horizon " + std::to_string(horizon));
    }
    throw Error(ErrorKind::PrecisionExhausted,
                "digit sequences end before they diverge");
  }
  check_digits(a.first(*m));
  check_digits(b.first(*m));

  // Both cylinders I(a_1..a_m) and I(b_1..b_m) are discs containing the
  // convergents p_a/q_a and p_b/q_b, of diameters q^(-2 deg q_a - 1) and
  // q^(-2 deg q_b - 1). The convergents are farther apart than either
  // diameter, so by the ultrametric inequality every pair of points of the
  // two cylinders has the same distance as the convergents.
  ConvergentAccumulator acc(a[0].field());
  for (std::size_t i = 0; i + 1 < *m; ++i) acc.push(a[i]);
  ConvergentAccumulator acc_b = acc;
  acc.push(a[*m - 1]);
  acc_b.push(b[*m - 1]);
  const ConvergentPair& ca = acc.current();
  const ConvergentPair& cb = acc_b.current();
  const Poly cross = ca.p * cb.q - cb.p * ca.q;
  const Degree dqa = ca.q.degree();
  const Degree dqb = cb.q.degree();
  const Degree e = cross.degree() - dqa - dqb;
  if (e <= -2 * std::min(dqa, dqb) - 1) {
    throw Error(ErrorKind::PrecisionExhausted, "convergents closer than the cylinder diameters");
  }
  return QPower::of(e);
}

}  // namespace lcf
