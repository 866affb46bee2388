#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "laurentcf/integer.hpp"

namespace lcf {

using Degree = std::int64_t;

/// Degree of the zero polynomial. Compares below every finite degree.
inline constexpr Degree kMinusInfinity = std::numeric_limits<Degree>::min();

/// The prime field F_q. Only prime q up to 251 is supported, so a residue
/// always fits in one byte.
class PrimeField {
 public:
  static constexpr std::uint32_t kMaxPrime = 251;

  explicit PrimeField(std::uint32_t q);

  std::uint32_t q() const noexcept { return q_; }
  bool is_binary() const noexcept { return q_ == 2; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
    const std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept {
    return a >= b ? a - b : a + q_ - b;
  }
  std::uint32_t neg(std::uint32_t a) const noexcept { return a == 0 ? 0 : q_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept { return (a * b) % q_; }
  std::uint32_t inv(std::uint32_t a) const;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t q_;
};

bool is_prime(std::uint64_t n) noexcept;

/// Polynomial over a prime field. Binary-field coefficients are bit-packed
/// into 64-bit words, other fields use one byte per coefficient. Values are
/// always normalized: no zero leading coefficient is stored.
class Poly {
 public:
  explicit Poly(PrimeField field) : field_(field) {}

  /// Coefficients listed from X^0 upward; entries are reduced mod q.
  static Poly from_coefficients(PrimeField field, std::span<const std::uint32_t> low_to_high);
  static Poly constant(PrimeField field, std::uint32_t c);
  static Poly monomial(PrimeField field, Degree degree, std::uint32_t c = 1);
  static Poly x(PrimeField field) { return monomial(field, 1); }

  /// Inverse of value(): base-q digits of v become the coefficients.
  static Poly from_value(PrimeField field, const Integer& v);

  const PrimeField& field() const noexcept { return field_; }
  Degree degree() const noexcept;
  bool is_zero() const noexcept;
  std::uint32_t coeff(Degree i) const noexcept;
  std::uint32_t leading() const noexcept;
  bool is_monic() const noexcept { return !is_zero() && leading() == 1; }

  /// Integer whose base-q digits are the coefficients (leading digit most
  /// significant); this is the sort key of the canonical order.
  Integer value() const;

  Poly& operator+=(const Poly& rhs);
  Poly& operator-=(const Poly& rhs);
  Poly& operator*=(const Poly& rhs);

  friend Poly operator+(Poly lhs, const Poly& rhs) { return lhs += rhs; }
  friend Poly operator-(Poly lhs, const Poly& rhs) { return lhs -= rhs; }
  friend Poly operator*(const Poly& lhs, const Poly& rhs);
  Poly operator-() const;

  Poly scaled(std::uint32_t c) const;
  Poly shifted(Degree k) const;  // multiply by X^k, k >= 0
  Poly monic() const;

  /// Canonical order: degree first, then the coefficient word compared from
  /// the leading coefficient down.
  friend std::strong_ordering operator<=>(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b);

  std::span<const std::uint64_t> words() const noexcept { return bits_; }
  std::span<const std::uint8_t> bytes() const noexcept { return coeffs_; }

  std::string to_string() const;

 private:
  friend class PolyAccess;

  void normalize();
  void check_field(const Poly& other) const;

  PrimeField field_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint8_t> coeffs_;
};

/// Parses the canonical text form ("X^3+2X+1", "0"); spaces are ignored and
/// a '-' sign is accepted on input.
Poly parse_poly(PrimeField field, std::string_view text);

struct DivMod {
  Poly quotient;
  Poly remainder;
};

DivMod divmod(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);
Poly mulmod(const Poly& a, const Poly& b, const Poly& m);
Poly powmod(const Poly& base, const Integer& exponent, const Poly& m);

/// 1-based position of p in the global canonical order of F_q^1[X].
Integer rank(const Poly& p);
Poly unrank(PrimeField field, const Integer& r);

/// Number of polynomials of degree d: (q-1) q^d.
Integer count_degree(PrimeField field, Degree d);

/// Polynomials of one degree in canonical order, produced one at a time.
class DegreeEnumerator {
 public:
  DegreeEnumerator(PrimeField field, Degree d);

  /// Next polynomial, or nullopt once the degree is exhausted.
  std::optional<Poly> next();

 private:
  PrimeField field_;
  Degree degree_;
  std::vector<std::uint32_t> digits_;
  bool done_ = false;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 22;

/// All polynomials of degree d, guarded by a cap on the count.
std::vector<Poly> enumerate_degree(PrimeField field, Degree d,
                                   std::uint64_t cap = kDefaultEnumerationCap);

bool is_irreducible(const Poly& p);

/// Moebius function.
int moebius(std::uint64_t n) noexcept;

/// Irreducible polynomials of degree d; the monic count is the necklace
/// number (1/d) sum_{e | d} mu(e) q^{d/e}.
Integer count_irreducible(PrimeField field, Degree d, bool monic_only);

}  // namespace lcf
