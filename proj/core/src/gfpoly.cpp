#include "laurentcf/gfpoly.hpp"

#include <algorithm>
#include <cctype>

#include "gf2_kernels.hpp"
#include "laurentcf/error.hpp"

namespace lcf {

namespace gf2 = detail::gf2;

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
  if (!is_prime(q) || q > kMaxPrime) {
    throw Error(ErrorKind::InvalidArgument,
                "field size must be a prime <= 251, got " + std::to_string(q));
  }
}

std::uint32_t PrimeField::inv(std::uint32_t a) const {
  if (a % q_ == 0) throw Error(ErrorKind::DivisionByZero, "inverse of zero in F_q");
  // a^(q-2) by square and multiply.
  std::uint32_t result = 1;
  std::uint32_t base = a % q_;
  for (std::uint32_t e = q_ - 2; e != 0; e >>= 1) {
    if (e & 1U) result = mul(result, base);
    base = mul(base, base);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Poly

Poly Poly::from_coefficients(PrimeField field, std::span<const std::uint32_t> low_to_high) {
  Poly p(field);
  if (field.is_binary()) {
    p.bits_.assign((low_to_high.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < low_to_high.size(); ++i) {
      if (low_to_high[i] & 1U) p.bits_[i / 64] |= std::uint64_t{1} << (i % 64);
    }
  } else {
    p.coeffs_.resize(low_to_high.size());
    for (std::size_t i = 0; i < low_to_high.size(); ++i) {
      p.coeffs_[i] = static_cast<std::uint8_t>(low_to_high[i] % field.q());
    }
  }
  p.normalize();
  return p;
}

Poly Poly::constant(PrimeField field, std::uint32_t c) { return monomial(field, 0, c); }

Poly Poly::monomial(PrimeField field, Degree degree, std::uint32_t c) {
  if (degree < 0) throw Error(ErrorKind::InvalidArgument, "negative monomial degree");
  Poly p(field);
  c %= field.q();
  if (c == 0) return p;
  const auto d = static_cast<std::size_t>(degree);
  if (field.is_binary()) {
    p.bits_.assign(d / 64 + 1, 0);
    p.bits_[d / 64] = std::uint64_t{1} << (d % 64);
  } else {
    p.coeffs_.assign(d + 1, 0);
    p.coeffs_[d] = static_cast<std::uint8_t>(c);
  }
  return p;
}

Poly Poly::from_value(PrimeField field, const Integer& v) {
  if (sgn(v) < 0) throw Error(ErrorKind::InvalidArgument, "negative polynomial value");
  Poly p(field);
  if (sgn(v) == 0) return p;
  if (field.is_binary()) {
    const std::size_t words = (mpz_sizeinbase(v.get_mpz_t(), 2) + 63) / 64;
    p.bits_.assign(words, 0);
    std::size_t written = 0;
    mpz_export(p.bits_.data(), &written, -1, sizeof(std::uint64_t), 0, 0, v.get_mpz_t());
    p.bits_.resize(written);
  } else if (field.q() <= 36) {
    const std::string digits = v.get_str(static_cast<int>(field.q()));
    p.coeffs_.resize(digits.size());
    for (std::size_t i = 0; i < digits.size(); ++i) {
      const char ch = digits[digits.size() - 1 - i];
      p.coeffs_[i] = static_cast<std::uint8_t>(std::isdigit(static_cast<unsigned char>(ch))
                                                   ? ch - '0'
                                                   : ch - 'a' + 10);
    }
  } else {
    Integer rest = v;
    while (sgn(rest) != 0) {
      p.coeffs_.push_back(
          static_cast<std::uint8_t>(mpz_tdiv_q_ui(rest.get_mpz_t(), rest.get_mpz_t(), field.q())));
    }
  }
  p.normalize();
  return p;
}

void Poly::normalize() {
  if (field_.is_binary()) {
    gf2::trim(bits_);
  } else {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }
}

void Poly::check_field(const Poly& other) const {
  if (field_ != other.field_) {
    throw Error(ErrorKind::FieldMismatch, "polynomials over F_" + std::to_string(field_.q()) +
                                              " and F_" + std::to_string(other.field_.q()));
  }
}

Degree Poly::degree() const noexcept {
  if (field_.is_binary()) {
    return bits_.empty() ? kMinusInfinity : gf2::degree(bits_);
  }
  return coeffs_.empty() ? kMinusInfinity : static_cast<Degree>(coeffs_.size()) - 1;
}

bool Poly::is_zero() const noexcept { return bits_.empty() && coeffs_.empty(); }

std::uint32_t Poly::coeff(Degree i) const noexcept {
  if (i < 0) return 0;
  const auto k = static_cast<std::size_t>(i);
  if (field_.is_binary()) {
    return k / 64 < bits_.size() ? static_cast<std::uint32_t>((bits_[k / 64] >> (k % 64)) & 1U)
                                 : 0;
  }
  return k < coeffs_.size() ? coeffs_[k] : 0;
}

std::uint32_t Poly::leading() const noexcept {
  if (is_zero()) return 0;
  return field_.is_binary() ? 1 : coeffs_.back();
}

Integer Poly::value() const {
  Integer v;
  if (is_zero()) return v;
  if (field_.is_binary()) {
    mpz_import(v.get_mpz_t(), bits_.size(), -1, sizeof(std::uint64_t), 0, 0, bits_.data());
    return v;
  }
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    v *= field_.q();
    v += static_cast<unsigned long>(*it);
  }
  return v;
}

Poly& Poly::operator+=(const Poly& rhs) {
  check_field(rhs);
  if (field_.is_binary()) {
    if (bits_.size() < rhs.bits_.size()) bits_.resize(rhs.bits_.size(), 0);
    for (std::size_t i = 0; i < rhs.bits_.size(); ++i) bits_[i] ^= rhs.bits_[i];
  } else {
    if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0);
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) {
      coeffs_[i] = static_cast<std::uint8_t>(field_.add(coeffs_[i], rhs.coeffs_[i]));
    }
  }
  normalize();
  return *this;
}

Poly& Poly::operator-=(const Poly& rhs) {
  check_field(rhs);
  if (field_.is_binary()) return *this += rhs;
  if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0);
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) {
    coeffs_[i] = static_cast<std::uint8_t>(field_.sub(coeffs_[i], rhs.coeffs_[i]));
  }
  normalize();
  return *this;
}

Poly operator*(const Poly& lhs, const Poly& rhs) {
  lhs.check_field(rhs);
  Poly out(lhs.field_);
  if (lhs.is_zero() || rhs.is_zero()) return out;
  if (lhs.field_.is_binary()) {
    out.bits_ = gf2::multiply(lhs.bits_, rhs.bits_);
    return out;
  }
  const std::uint64_t q = lhs.field_.q();
  const auto& a = lhs.coeffs_;
  const auto& b = rhs.coeffs_;
  std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += std::uint64_t{a[i]} * b[j];
  }
  out.coeffs_.resize(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out.coeffs_[i] = static_cast<std::uint8_t>(acc[i] % q);
  out.normalize();
  return out;
}

Poly& Poly::operator*=(const Poly& rhs) {
  *this = *this * rhs;
  return *this;
}

Poly Poly::operator-() const {
  if (field_.is_binary()) return *this;
  Poly out = *this;
  for (auto& c : out.coeffs_) c = static_cast<std::uint8_t>(field_.neg(c));
  return out;
}

Poly Poly::scaled(std::uint32_t c) const {
  c %= field_.q();
  if (c == 0) return Poly(field_);
  if (c == 1) return *this;
  Poly out = *this;
  for (auto& v : out.coeffs_) v = static_cast<std::uint8_t>(field_.mul(v, c));
  return out;
}

Poly Poly::shifted(Degree k) const {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "negative shift");
  if (is_zero() || k == 0) return *this;
  Poly out(field_);
  const auto s = static_cast<std::size_t>(k);
  if (field_.is_binary()) {
    out.bits_.assign(bits_.size() + s / 64 + 1, 0);
    gf2::xor_shifted(out.bits_, bits_, s);
  } else {
    out.coeffs_.assign(s, 0);
    out.coeffs_.insert(out.coeffs_.end(), coeffs_.begin(), coeffs_.end());
  }
  out.normalize();
  return out;
}

Poly Poly::monic() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "monic part of zero");
  return scaled(field_.inv(leading()));
}

std::strong_ordering operator<=>(const Poly& a, const Poly& b) {
  a.check_field(b);
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  if (a.field_.is_binary()) {
    for (std::size_t i = a.bits_.size(); i-- > 0;) {
      if (auto c = a.bits_[i] <=> b.bits_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }
  for (std::size_t i = a.coeffs_.size(); i-- > 0;) {
    if (auto c = a.coeffs_[i] <=> b.coeffs_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

bool operator==(const Poly& a, const Poly& b) {
  return a.field_ == b.field_ && a.bits_ == b.bits_ && a.coeffs_ == b.coeffs_;
}

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (Degree k = degree(); k >= 0; --k) {
    const std::uint32_t c = coeff(k);
    if (c == 0) continue;
    if (!out.empty()) out += '+';
    if (k == 0) {
      out += std::to_string(c);
      continue;
    }
    if (c != 1) out += std::to_string(c);
    out += 'X';
    if (k >= 2) out += '^' + std::to_string(k);
  }
  return out;
}

Poly parse_poly(PrimeField field, std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  auto fail = [&](const std::string& why) {
    return Error(ErrorKind::ParseError, "bad polynomial '" + std::string(text) + "': " + why);
  };
  if (s.empty()) throw fail("empty");

  std::vector<std::uint32_t> coeffs;
  std::size_t i = 0;
  bool first = true;
  while (i < s.size()) {
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') {
      negative = s[i] == '-';
      ++i;
    } else if (!first) {
      throw fail("expected '+' or '-'");
    }
    first = false;

    std::uint64_t c = 1;
    bool have_digits = false;
    std::uint64_t number = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      number = number * 10 + static_cast<std::uint64_t>(s[i] - '0');
      if (number > (std::uint64_t{1} << 40)) throw fail("coefficient too large");
      have_digits = true;
      ++i;
    }
    if (have_digits) c = number % field.q();
    if (i < s.size() && s[i] == '*') {
      if (!have_digits) throw fail("'*' without coefficient");
      ++i;
    }

    std::uint64_t k = 0;
    if (i < s.size() && (s[i] == 'X' || s[i] == 'x')) {
      ++i;
      k = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::uint64_t e = 0;
        bool have_exp = false;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
          e = e * 10 + static_cast<std::uint64_t>(s[i] - '0');
          if (e > (std::uint64_t{1} << 32)) throw fail("exponent too large");
          have_exp = true;
          ++i;
        }
        if (!have_exp) throw fail("missing exponent");
        k = e;
      }
    } else if (!have_digits) {
      throw fail("empty term");
    }
    if (coeffs.size() <= k) coeffs.resize(k + 1, 0);
    const auto term = static_cast<std::uint32_t>(c);
    coeffs[k] = negative ? field.sub(coeffs[k], term) : field.add(coeffs[k], term);
  }
  return Poly::from_coefficients(field, coeffs);
}

// ---------------------------------------------------------------------------
// Division and modular arithmetic

class PolyAccess {
 public:
  static std::vector<std::uint64_t>& bits(Poly& p) { return p.bits_; }
  static std::vector<std::uint8_t>& bytes(Poly& p) { return p.coeffs_; }
  static void normalize(Poly& p) { p.normalize(); }
};

DivMod divmod(const Poly& a, const Poly& b) {
  if (a.field() != b.field()) {
    throw Error(ErrorKind::FieldMismatch, "divmod over different fields");
  }
  if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
  const PrimeField f = a.field();
  const Degree da = a.degree();
  const Degree db = b.degree();
  if (a.is_zero() || da < db) return {Poly(f), a};

  Poly quotient(f);
  Poly remainder = a;
  if (f.is_binary()) {
    auto& r = PolyAccess::bits(remainder);
    auto& qb = PolyAccess::bits(quotient);
    qb.assign(static_cast<std::size_t>(da - db) / 64 + 1, 0);
    for (Degree i = da; i >= db; --i) {
      const auto k = static_cast<std::size_t>(i);
      if (((r[k / 64] >> (k % 64)) & 1U) == 0) continue;
      const auto shift = static_cast<std::uint64_t>(i - db);
      qb[shift / 64] |= std::uint64_t{1} << (shift % 64);
      gf2::xor_shifted(r, b.words(), shift);
    }
    PolyAccess::normalize(quotient);
    PolyAccess::normalize(remainder);
    return {quotient, remainder};
  }

  auto& r = PolyAccess::bytes(remainder);
  auto& qc = PolyAccess::bytes(quotient);
  const auto bc = b.bytes();
  const std::uint32_t lead_inv = f.inv(b.leading());
  qc.assign(static_cast<std::size_t>(da - db) + 1, 0);
  for (Degree i = da; i >= db; --i) {
    const std::uint32_t c = r[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    const std::uint32_t factor = f.mul(c, lead_inv);
    const auto shift = static_cast<std::size_t>(i - db);
    qc[shift] = static_cast<std::uint8_t>(factor);
    for (std::size_t j = 0; j < bc.size(); ++j) {
      r[shift + j] = static_cast<std::uint8_t>(f.sub(r[shift + j], f.mul(factor, bc[j])));
    }
  }
  PolyAccess::normalize(quotient);
  PolyAccess::normalize(remainder);
  return {quotient, remainder};
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a;
  Poly y = b;
  while (!y.is_zero()) {
    Poly r = divmod(x, y).remainder;
    x = std::move(y);
    y = std::move(r);
  }
  return x.is_zero() ? x : x.monic();
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return divmod(a * b, m).remainder; }

Poly powmod(const Poly& base, const Integer& exponent, const Poly& m) {
  Poly result = divmod(Poly::constant(base.field(), 1), m).remainder;
  Poly b = divmod(base, m).remainder;
  const std::size_t bits = sgn(exponent) == 0 ? 0 : mpz_sizeinbase(exponent.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = mulmod(result, result, m);
    if (mpz_tstbit(exponent.get_mpz_t(), i)) result = mulmod(result, b, m);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Canonical order and enumeration

Integer rank(const Poly& p) {
  if (p.degree() < 1) {
    throw Error(ErrorKind::OutOfDomain, "rank is defined on polynomials of degree >= 1");
  }
  // Polynomials of degree 1..d-1 number q^d - q, and within degree d the
  // offset is value - q^d; together rank = value - q + 1.
  Integer r = p.value();
  r -= p.field().q();
  r += 1;
  return r;
}

Poly unrank(PrimeField field, const Integer& r) {
  if (r < 1) throw Error(ErrorKind::OutOfDomain, "rank must be >= 1");
  Integer v = r;
  v += field.q();
  v -= 1;
  return Poly::from_value(field, v);
}

Integer count_degree(PrimeField field, Degree d) {
  if (d < 0) return Integer(0);
  Integer n = pow(field.q(), static_cast<std::uint64_t>(d));
  n *= field.q() - 1;
  return n;
}

DegreeEnumerator::DegreeEnumerator(PrimeField field, Degree d) : field_(field), degree_(d) {
  if (d < 0) throw Error(ErrorKind::InvalidArgument, "negative degree");
  digits_.assign(static_cast<std::size_t>(d) + 1, 0);
  digits_.back() = 1;
}

std::optional<Poly> DegreeEnumerator::next() {
  if (done_) return std::nullopt;
  Poly current = Poly::from_coefficients(field_, digits_);
  const std::uint32_t q = field_.q();
  std::size_t i = 0;
  while (i < digits_.size()) {
    if (++digits_[i] < q) break;
    digits_[i] = 0;
    ++i;
  }
  if (i == digits_.size()) done_ = true;
  return current;
}

std::vector<Poly> enumerate_degree(PrimeField field, Degree d, std::uint64_t cap) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "enumeration degree must be >= 1");
  const Integer needed = count_degree(field, d);
  if (needed > cap) {
    throw Error(ErrorKind::CapExceeded,
                "degree " + std::to_string(d) + " requires " + to_decimal(needed) +
                    " polynomials, cap is " + std::to_string(cap));
  }
  std::vector<Poly> out;
  out.reserve(needed.get_ui());
  DegreeEnumerator e(field, d);
  while (auto p = e.next()) out.push_back(std::move(*p));
  return out;
}

// ---------------------------------------------------------------------------
// Irreducibility

bool is_irreducible(const Poly& p) {
  const Degree n = p.degree();
  if (n < 1) throw Error(ErrorKind::OutOfDomain, "irreducibility needs degree >= 1");
  if (n == 1) return true;
  const PrimeField f = p.field();
  const Poly m = p.monic();
  const Poly x = Poly::x(f);
  // Ben-Or: p is irreducible iff gcd(X^(q^i) - X, p) = 1 for i <= n/2.
  Poly h = x;
  const Integer q(f.q());
  for (Degree i = 1; i <= n / 2; ++i) {
    h = powmod(h, q, m);
    if (gcd(h - x, m).degree() > 0) return false;
  }
  return true;
}

int moebius(std::uint64_t n) noexcept {
  if (n == 0) return 0;
  int result = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

Integer count_irreducible(PrimeField field, Degree d, bool monic_only) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "degree must be >= 1");
  const auto n = static_cast<std::uint64_t>(d);
  Integer sum;
  for (std::uint64_t e = 1; e <= n; ++e) {
    if (n % e != 0) continue;
    const int mu = moebius(e);
    if (mu == 0) continue;
    const Integer term = pow(field.q(), n / e);
    if (mu > 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  sum /= n;
  if (!monic_only) sum *= field.q() - 1;
  return sum;
}

}  // namespace lcf
