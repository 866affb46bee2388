#include "laurentcf/integer.hpp"

#include <cmath>
#include <numbers>

#include "laurentcf/error.hpp"

namespace lcf {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::NoDivergence: return "NoDivergence";
    case ErrorKind::DegenerateWindow: return "DegenerateWindow";
    case ErrorKind::NotMember: return "NotMember";
    case ErrorKind::NotSubset: return "NotSubset";
    case ErrorKind::EmptyDenominator: return "EmptyDenominator";
    case ErrorKind::InfeasibleWindow: return "InfeasibleWindow";
    case ErrorKind::SearchExhausted: return "SearchExhausted";
    case ErrorKind::InsufficientArgmax: return "InsufficientArgmax";
    case ErrorKind::PlanViolation: return "PlanViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

double log2(const Integer& value) {
  if (sgn(value) <= 0) {
    throw Error(ErrorKind::OutOfDomain, "log2 of a non-positive integer");
  }
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log2(mantissa) + static_cast<double>(exponent);
}

double log(const Integer& value) { return log2(value) * std::numbers::ln2; }

Integer pow(std::uint64_t base, std::uint64_t exponent) {
  Integer result;
  if (base == 2) {
    mpz_setbit(result.get_mpz_t(), exponent);
    return result;
  }
  mpz_ui_pow_ui(result.get_mpz_t(), base, exponent);
  return result;
}

std::string to_decimal(const Integer& value) { return value.get_str(10); }

Integer parse_integer(const std::string& text) {
  Integer out;
  if (text.empty() || out.set_str(text, 10) != 0) {
    throw Error(ErrorKind::ParseError, "not a decimal integer: '" + text + "'");
  }
  return out;
}

}  // namespace lcf
