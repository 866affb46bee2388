#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace lcf {

using Integer = mpz_class;
using Rational = mpq_class;

/// Base-2 logarithm of a positive integer, accurate to double precision
/// even when the value has millions of bits.
double log2(const Integer& value);

/// Natural logarithm of a positive integer.
double log(const Integer& value);

Integer pow(std::uint64_t base, std::uint64_t exponent);

std::string to_decimal(const Integer& value);
Integer parse_integer(const std::string& text);

}  // namespace lcf
