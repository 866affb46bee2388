#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "laurentcf/gfpoly.hpp"

namespace lcf {

/// A value of the form q^exponent, or zero. Norms, distances and cylinder
/// diameters in F_q((X^-1)) all have this shape.
struct QPower {
  bool zero = false;
  Degree exponent = 0;

  static QPower zero_value() { return {true, 0}; }
  static QPower of(Degree e) { return {false, e}; }

  Rational to_rational(std::uint32_t q) const;

  friend std::strong_ordering operator<=>(const QPower& a, const QPower& b) {
    if (a.zero || b.zero) return b.zero <=> a.zero;
    return a.exponent <=> b.exponent;
  }
  friend bool operator==(const QPower&, const QPower&) = default;
};

/// Element of F_q(X) kept in lowest terms with a monic denominator.
class RationalFunction {
 public:
  RationalFunction(Poly num, Poly den);

  const Poly& num() const noexcept { return num_; }
  const Poly& den() const noexcept { return den_; }
  const PrimeField& field() const noexcept { return num_.field(); }

  /// Degree of the element in the sense deg(num) - deg(den).
  Degree degree() const noexcept;
  bool is_zero() const noexcept { return num_.is_zero(); }

  RationalFunction operator-(const RationalFunction& rhs) const;

  friend bool operator==(const RationalFunction&, const RationalFunction&) = default;

  std::string to_string() const;

 private:
  Poly num_;
  Poly den_;
};

/// Accepts "P", "P/Q" and "(P)/(Q)" with P, Q in canonical polynomial text.
RationalFunction parse_rational(PrimeField field, std::string_view text);

/// Truncated formal Laurent series sum c_e X^e. Coefficients are stored
/// densely from the lead exponent down to exponent -known_through. An exact
/// series has all further coefficients equal to zero; otherwise they are
/// unknown and the value is only determined up to a ball of radius
/// q^-(known_through + 1).
class LaurentSeries {
 public:
  /// Descending coefficients starting at X^lead_exp, known through X^-known_through.
  static LaurentSeries truncated(PrimeField field, Degree lead_exp,
                                 std::vector<std::uint8_t> descending, Degree known_through);
  /// Descending coefficients starting at X^lead_exp; the tail is zero.
  static LaurentSeries exact(PrimeField field, Degree lead_exp,
                             std::vector<std::uint8_t> descending);
  static LaurentSeries from_poly(const Poly& p);
  static LaurentSeries exact_zero(PrimeField field);

  const PrimeField& field() const noexcept { return field_; }
  bool is_exact() const noexcept { return exact_; }
  bool is_exact_zero() const noexcept { return exact_ && coeffs_.empty(); }

  /// True when a nonzero coefficient lies inside the known window.
  bool has_leading_term() const noexcept { return !coeffs_.empty(); }
  /// Exponent of the leading nonzero coefficient (requires has_leading_term).
  Degree lead_exp() const noexcept { return lead_; }
  /// Deepest certified index m: coefficients of X^-i are exact for i <= m.
  /// For exact series this is the index of the last stored coefficient.
  Degree known_through() const noexcept { return through_; }

  /// Coefficient of X^e. Throws PrecisionExhausted for unknown coefficients.
  std::uint32_t coeff(Degree e) const;

  /// Forgets every coefficient of X^-i with i > through.
  LaurentSeries truncate(Degree through) const;

  LaurentSeries operator+(const LaurentSeries& rhs) const;
  LaurentSeries operator-(const LaurentSeries& rhs) const;
  LaurentSeries operator*(const LaurentSeries& rhs) const;
  LaurentSeries operator-() const;

  /// Exact equality of representation (window, precision and coefficients).
  friend bool operator==(const LaurentSeries&, const LaurentSeries&) = default;

  std::string to_text() const;

 private:
  LaurentSeries(PrimeField field) : field_(field) {}

  void normalize();
  Degree window_bottom() const noexcept;  // lowest stored exponent

  PrimeField field_;
  Degree lead_ = 0;
  std::vector<std::uint8_t> coeffs_;
  Degree through_ = 0;
  bool exact_ = true;
};

/// Parses "deg:<lead_exp>;coeffs:<c_lead,...>;through:<m>".
LaurentSeries parse_series(PrimeField field, std::string_view text);

/// ||x||_q = q^deg x. Throws PrecisionExhausted when the known window is all
/// zero but the series is not exactly zero.
QPower norm(const LaurentSeries& x);

/// Polynomial part sum_{e >= 0} c_e X^e; needs known_through >= 0.
Poly integral_part(const LaurentSeries& x);

/// x - [x].
LaurentSeries fractional_part(const LaurentSeries& x);

/// Deepest index to which 1/x can be certified: known_through + 2 lead_exp.
Degree max_inverse_through(const LaurentSeries& x);

/// 1/x certified through X^-want_through. If x is known through m with lead
/// exponent L, the perturbation of 1/x is at most q^-(m+1) / q^(2L), so
/// want_through may not exceed m + 2L (PrecisionExhausted otherwise).
LaurentSeries invert(const LaurentSeries& x, Degree want_through);

/// Expansion of r at infinity through X^-want_through. The result is exact
/// when the expansion terminates (monomial denominator).
LaurentSeries from_rational(const RationalFunction& r, Degree want_through);

/// ||x - y||_q; the first differing coefficient must lie in both windows.
QPower distance(const LaurentSeries& x, const LaurentSeries& y);

}  // namespace lcf
