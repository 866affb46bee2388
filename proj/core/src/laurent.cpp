#include "laurentcf/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "laurentcf/error.hpp"

namespace lcf {
namespace {

constexpr Degree kUnbounded = std::numeric_limits<Degree>::max() / 4;

std::vector<std::uint32_t> widen(std::span<const std::uint8_t> v) {
  return {v.begin(), v.end()};
}

// Low n coefficients of p as a polynomial (p mod Y^n).
Poly low_part(const Poly& p, Degree n) {
  const Degree d = p.degree();
  if (d < n) return p;
  std::vector<std::uint32_t> c(static_cast<std::size_t>(n));
  for (Degree i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = p.coeff(i);
  return Poly::from_coefficients(p.field(), c);
}

// Inverse of a power series u (u(0) != 0) modulo Y^n by Newton iteration.
Poly inverse_series(const Poly& u, Degree n) {
  const PrimeField f = u.field();
  Poly d = Poly::constant(f, f.inv(u.coeff(0)));
  const Poly two = Poly::constant(f, 2 % f.q());
  Degree prec = 1;
  while (prec < n) {
    prec = std::min<Degree>(2 * prec, n);
    const Poly e = low_part(low_part(u, prec) * d, prec);
    d = low_part(d * (two - e), prec);
  }
  return low_part(d, n);
}

// Reads a polynomial as Y-series: coefficient of X^(deg - j) becomes Y^j.
Poly reversed(const Poly& p) {
  const Degree d = p.degree();
  std::vector<std::uint32_t> c(static_cast<std::size_t>(d) + 1);
  for (Degree j = 0; j <= d; ++j) c[static_cast<std::size_t>(j)] = p.coeff(d - j);
  return Poly::from_coefficients(p.field(), c);
}

std::vector<std::uint8_t> series_coeffs(const Poly& y_series, Degree count) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(std::max<Degree>(count, 0)));
  for (Degree j = 0; j < count; ++j) {
    out[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(y_series.coeff(j));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// QPower / RationalFunction

Rational QPower::to_rational(std::uint32_t q) const {
  if (zero) return Rational(0);
  const Integer p = pow(q, static_cast<std::uint64_t>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent < 0 ? Rational(Integer(1), p) : Rational(p);
  r.canonicalize();
  return r;
}

RationalFunction::RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (num_.field() != den_.field()) {
    throw Error(ErrorKind::FieldMismatch, "numerator and denominator over different fields");
  }
  if (den_.is_zero()) throw Error(ErrorKind::DivisionByZero, "zero denominator");
  if (num_.is_zero()) {
    den_ = Poly::constant(num_.field(), 1);
    return;
  }
  const Poly g = gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = divmod(num_, g).quotient;
    den_ = divmod(den_, g).quotient;
  }
  const std::uint32_t s = num_.field().inv(den_.leading());
  num_ = num_.scaled(s);
  den_ = den_.scaled(s);
}

Degree RationalFunction::degree() const noexcept {
  return num_.is_zero() ? kMinusInfinity : num_.degree() - den_.degree();
}

RationalFunction RationalFunction::operator-(const RationalFunction& rhs) const {
  return RationalFunction(num_ * rhs.den_ - rhs.num_ * den_, den_ * rhs.den_);
}

std::string RationalFunction::to_string() const {
  if (den_.degree() == 0) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

RationalFunction parse_rational(PrimeField field, std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  auto strip = [](std::string part) {
    while (part.size() >= 2 && part.front() == '(' && part.back() == ')') {
      part = part.substr(1, part.size() - 2);
    }
    return part;
  };
  int depth = 0;
  std::size_t slash = std::string::npos;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == '/' && depth == 0) {
      if (slash != std::string::npos) {
        throw Error(ErrorKind::ParseError, "more than one '/' in '" + s + "'");
      }
      slash = i;
    }
  }
  if (depth != 0) throw Error(ErrorKind::ParseError, "unbalanced parentheses in '" + s + "'");
  if (slash == std::string::npos) {
    return RationalFunction(parse_poly(field, strip(s)), Poly::constant(field, 1));
  }
  return RationalFunction(parse_poly(field, strip(s.substr(0, slash))),
                          parse_poly(field, strip(s.substr(slash + 1))));
}

// ---------------------------------------------------------------------------
// LaurentSeries

LaurentSeries LaurentSeries::truncated(PrimeField field, Degree lead_exp,
                                       std::vector<std::uint8_t> descending, Degree known_through) {
  LaurentSeries s(field);
  s.lead_ = lead_exp;
  s.through_ = known_through;
  s.exact_ = false;
  for (auto& c : descending) c = static_cast<std::uint8_t>(c % field.q());
  // Drop coefficients below the known window.
  const Degree keep = std::max<Degree>(0, lead_exp + known_through + 1);
  if (static_cast<Degree>(descending.size()) > keep) descending.resize(static_cast<std::size_t>(keep));
  if (static_cast<Degree>(descending.size()) < keep) descending.resize(static_cast<std::size_t>(keep), 0);
  s.coeffs_ = std::move(descending);
  s.normalize();
  return s;
}

LaurentSeries LaurentSeries::exact(PrimeField field, Degree lead_exp,
                                   std::vector<std::uint8_t> descending) {
  LaurentSeries s(field);
  s.lead_ = lead_exp;
  s.exact_ = true;
  for (auto& c : descending) c = static_cast<std::uint8_t>(c % field.q());
  s.coeffs_ = std::move(descending);
  s.normalize();
  return s;
}

LaurentSeries LaurentSeries::from_poly(const Poly& p) {
  if (p.is_zero()) return exact_zero(p.field());
  const Degree d = p.degree();
  std::vector<std::uint8_t> c(static_cast<std::size_t>(d) + 1);
  for (Degree j = 0; j <= d; ++j) c[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(p.coeff(d - j));
  return exact(p.field(), d, std::move(c));
}

LaurentSeries LaurentSeries::exact_zero(PrimeField field) { return exact(field, 0, {}); }

void LaurentSeries::normalize() {
  std::size_t skip = 0;
  while (skip < coeffs_.size() && coeffs_[skip] == 0) ++skip;
  if (skip > 0) {
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(skip));
    lead_ -= static_cast<Degree>(skip);
  }
  if (exact_) {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    if (coeffs_.empty()) {
      lead_ = 0;
      through_ = 0;
    } else {
      through_ = -(lead_ - static_cast<Degree>(coeffs_.size()) + 1);
    }
  } else if (coeffs_.empty()) {
    lead_ = -(through_ + 1);
  }
}

Degree LaurentSeries::window_bottom() const noexcept {
  return lead_ - static_cast<Degree>(coeffs_.size()) + 1;
}

std::uint32_t LaurentSeries::coeff(Degree e) const {
  if (!exact_ && e < -through_) {
    throw Error(ErrorKind::PrecisionExhausted,
                "coefficient of X^" + std::to_string(e) + " is beyond the known window");
  }
  if (coeffs_.empty() || e > lead_ || e < window_bottom()) return 0;
  return coeffs_[static_cast<std::size_t>(lead_ - e)];
}

LaurentSeries LaurentSeries::truncate(Degree through) const {
  if (!exact_ && through > through_) {
    throw Error(ErrorKind::PrecisionExhausted, "cannot extend the known window");
  }
  std::vector<std::uint8_t> c;
  if (!coeffs_.empty()) {
    for (Degree e = lead_; e >= -through && e >= window_bottom(); --e) c.push_back(coeffs_[static_cast<std::size_t>(lead_ - e)]);
  }
  const Degree top = coeffs_.empty() ? -(through + 1) : lead_;
  return truncated(field_, top, std::move(c), through);
}

LaurentSeries LaurentSeries::operator-() const {
  LaurentSeries out = *this;
  for (auto& c : out.coeffs_) c = static_cast<std::uint8_t>(field_.neg(c));
  return out;
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& rhs) const { return *this + (-rhs); }

LaurentSeries LaurentSeries::operator+(const LaurentSeries& rhs) const {
  if (field_ != rhs.field_) throw Error(ErrorKind::FieldMismatch, "series over different fields");
  const bool both_exact = exact_ && rhs.exact_;
  Degree top = std::numeric_limits<Degree>::min();
  if (!coeffs_.empty()) top = lead_;
  if (!rhs.coeffs_.empty()) top = std::max(top, rhs.lead_);

  Degree through = kUnbounded;
  if (!exact_) through = std::min(through, through_);
  if (!rhs.exact_) through = std::min(through, rhs.through_);

  Degree bottom;
  if (both_exact) {
    bottom = std::numeric_limits<Degree>::max();
    if (!coeffs_.empty()) bottom = window_bottom();
    if (!rhs.coeffs_.empty()) bottom = std::min(bottom, rhs.window_bottom());
  } else {
    bottom = -through;
  }

  std::vector<std::uint8_t> c;
  if (top != std::numeric_limits<Degree>::min() && top >= bottom) {
    c.resize(static_cast<std::size_t>(top - bottom + 1));
    for (Degree e = top; e >= bottom; --e) {
      const std::uint32_t a = (coeffs_.empty() || e > lead_ || e < window_bottom()) ? 0 : coeffs_[static_cast<std::size_t>(lead_ - e)];
      const std::uint32_t b = (rhs.coeffs_.empty() || e > rhs.lead_ || e < rhs.window_bottom())
                                  ? 0
                                  : rhs.coeffs_[static_cast<std::size_t>(rhs.lead_ - e)];
      c[static_cast<std::size_t>(top - e)] = static_cast<std::uint8_t>(field_.add(a, b));
    }
  }
  if (both_exact) return exact(field_, top, std::move(c));
  if (c.empty()) top = -(through + 1);
  return truncated(field_, top, std::move(c), through);
}

LaurentSeries LaurentSeries::operator*(const LaurentSeries& rhs) const {
  if (field_ != rhs.field_) throw Error(ErrorKind::FieldMismatch, "series over different fields");
  if (is_exact_zero() || rhs.is_exact_zero()) return exact_zero(field_);

  // Upper bounds for the norms, used in the error propagation.
  const Degree lx = coeffs_.empty() ? -(through_ + 1) : lead_;
  const Degree ly = rhs.coeffs_.empty() ? -(rhs.through_ + 1) : rhs.lead_;
  Degree through = kUnbounded;
  if (!rhs.exact_) through = std::min(through, rhs.through_ - lx);
  if (!exact_) through = std::min(through, through_ - ly);

  Poly product(field_);
  if (!coeffs_.empty() && !rhs.coeffs_.empty()) {
    product = Poly::from_coefficients(field_, widen(coeffs_)) *
              Poly::from_coefficients(field_, widen(rhs.coeffs_));
  }
  const Degree lead = lead_ + rhs.lead_;
  if (exact_ && rhs.exact_) {
    return exact(field_, lead, series_coeffs(product, product.degree() + 1));
  }
  if (product.is_zero()) return truncated(field_, -(through + 1), {}, through);
  const Degree count = std::min<Degree>(product.degree() + 1, lead + through + 1);
  return truncated(field_, lead, series_coeffs(product, count), through);
}

std::string LaurentSeries::to_text() const {
  std::string out = "deg:" + std::to_string(lead_) + ";coeffs:";
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(coeffs_[i]);
  }
  out += ";through:" + std::to_string(through_);
  return out;
}

LaurentSeries parse_series(PrimeField field, std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  auto fail = [&](const std::string& why) {
    return Error(ErrorKind::ParseError, "bad series '" + s + "': " + why);
  };
  const auto p1 = s.find("deg:");
  const auto p2 = s.find(";coeffs:");
  const auto p3 = s.find(";through:");
  if (p1 != 0 || p2 == std::string::npos || p3 == std::string::npos || p3 < p2) {
    throw fail("expected deg:<n>;coeffs:<...>;through:<m>");
  }
  Degree lead = 0;
  Degree through = 0;
  try {
    lead = std::stoll(s.substr(4, p2 - 4));
    through = std::stoll(s.substr(p3 + 9));
  } catch (const std::exception&) {
    throw fail("non-integer field");
  }
  std::vector<std::uint8_t> coeffs;
  const std::string list = s.substr(p2 + 8, p3 - p2 - 8);
  std::size_t i = 0;
  while (i < list.size()) {
    std::size_t j = list.find(',', i);
    if (j == std::string::npos) j = list.size();
    const std::string item = list.substr(i, j - i);
    if (item.empty() || !std::all_of(item.begin(), item.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw fail("bad coefficient '" + item + "'");
    }
    const unsigned long v = std::stoul(item);
    if (v >= field.q()) throw fail("coefficient out of range");
    coeffs.push_back(static_cast<std::uint8_t>(v));
    i = j + 1;
  }
  if (!coeffs.empty() && static_cast<Degree>(coeffs.size()) != lead + through + 1) {
    throw fail("coefficient count does not match the window");
  }
  if (through < -lead - 1) throw fail("window ends above the lead exponent");
  const Degree top = coeffs.empty() ? -(through + 1) : lead;
  return LaurentSeries::truncated(field, top, std::move(coeffs), through);
}

// ---------------------------------------------------------------------------
// Free operations

QPower norm(const LaurentSeries& x) {
  if (x.is_exact_zero()) return QPower::zero_value();
  if (!x.has_leading_term()) {
    throw Error(ErrorKind::PrecisionExhausted,
                "all coefficients through X^-" + std::to_string(x.known_through()) +
                    " vanish; the norm is only bounded by q^-" +
                    std::to_string(x.known_through() + 1));
  }
  return QPower::of(x.lead_exp());
}

Poly integral_part(const LaurentSeries& x) {
  if (!x.is_exact() && x.known_through() < 0) {
    throw Error(ErrorKind::PrecisionExhausted, "integral part needs known_through >= 0");
  }
  const PrimeField f = x.field();
  if (!x.has_leading_term() || x.lead_exp() < 0) return Poly(f);
  std::vector<std::uint32_t> c(static_cast<std::size_t>(x.lead_exp()) + 1);
  for (Degree e = 0; e <= x.lead_exp(); ++e) c[static_cast<std::size_t>(e)] = x.coeff(e);
  return Poly::from_coefficients(f, c);
}

LaurentSeries fractional_part(const LaurentSeries& x) {
  return x - LaurentSeries::from_poly(integral_part(x));
}

Degree max_inverse_through(const LaurentSeries& x) {
  if (!x.has_leading_term()) {
    throw Error(x.is_exact_zero() ? ErrorKind::DivisionByZero : ErrorKind::PrecisionExhausted,
                "cannot invert a series without a certified leading term");
  }
  if (x.is_exact()) return kUnbounded;
  return x.known_through() + 2 * x.lead_exp();
}

LaurentSeries invert(const LaurentSeries& x, Degree want_through) {
  const Degree limit = max_inverse_through(x);
  if (want_through > limit) {
    throw Error(ErrorKind::PrecisionExhausted,
                "1/x is certified only through X^-" + std::to_string(limit) + ", requested X^-" +
                    std::to_string(want_through));
  }
  const PrimeField f = x.field();
  const Degree lead = x.lead_exp();
  // x = X^lead * u(Y) with Y = X^-1 and u(0) != 0, so 1/x = X^-lead / u(Y).
  const Degree terms = want_through - lead + 1;
  if (x.is_exact() && x.known_through() == -lead) {
    return LaurentSeries::exact(f, -lead, {static_cast<std::uint8_t>(f.inv(x.coeff(lead)))});
  }
  if (terms <= 0) return LaurentSeries::truncated(f, -(want_through + 1), {}, want_through);
  std::vector<std::uint32_t> u(static_cast<std::size_t>(terms));
  for (Degree j = 0; j < terms; ++j) {
    const Degree e = lead - j;
    if (!x.is_exact() && e < -x.known_through()) break;
    u[static_cast<std::size_t>(j)] = x.coeff(e);
  }
  const Poly inv = inverse_series(Poly::from_coefficients(f, u), terms);
  return LaurentSeries::truncated(f, -lead, series_coeffs(inv, terms), want_through);
}

LaurentSeries from_rational(const RationalFunction& r, Degree want_through) {
  const PrimeField f = r.field();
  if (r.is_zero()) return LaurentSeries::exact_zero(f);
  const Poly& num = r.num();
  const Poly& den = r.den();
  const Degree lead = num.degree() - den.degree();
  if (den == Poly::monomial(f, den.degree())) {
    // Terminating expansion: num / X^k.
    return LaurentSeries::exact(f, lead, [&] {
      std::vector<std::uint8_t> c;
      for (Degree e = num.degree(); e >= 0; --e) c.push_back(static_cast<std::uint8_t>(num.coeff(e)));
      return c;
    }());
  }
  const Degree terms = want_through + lead + 1;
  if (terms <= 0) return LaurentSeries::truncated(f, -(want_through + 1), {}, want_through);
  const Poly a = reversed(num);
  const Poly b = reversed(den);
  const Poly quotient = low_part(low_part(a, terms) * inverse_series(b, terms), terms);
  return LaurentSeries::truncated(f, lead, series_coeffs(quotient, terms), want_through);
}

QPower distance(const LaurentSeries& x, const LaurentSeries& y) { return norm(x - y); }

}  // namespace lcf
