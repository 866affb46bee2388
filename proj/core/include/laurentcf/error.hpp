#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lcf {

enum class ErrorKind {
  FieldMismatch,
  DivisionByZero,
  OutOfDomain,
  CapExceeded,
  PrecisionExhausted,
  NoDivergence,
  DegenerateWindow,
  NotMember,
  NotSubset,
  EmptyDenominator,
  InfeasibleWindow,
  SearchExhausted,
  InsufficientArgmax,
  PlanViolation,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// that front ends can report it in machine-readable form.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lcf
