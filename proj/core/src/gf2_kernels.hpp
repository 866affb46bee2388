#pragma once

#include <cstdint>
#include <span>
#include <vector>

// Word-level kernels for bit-packed F_2[X]. Bit i of word w holds the
// coefficient of X^(64 w + i).
namespace lcf::detail::gf2 {

using Word = std::uint64_t;

void clmul64(Word a, Word b, Word& lo, Word& hi) noexcept;

/// Product of two packed polynomials. Uses Karatsuba above a size threshold.
std::vector<Word> multiply(std::span<const Word> a, std::span<const Word> b);

/// Reference schoolbook product; kept for testing and benchmarking.
std::vector<Word> multiply_schoolbook(std::span<const Word> a, std::span<const Word> b);

/// dst ^= src * X^shift. dst must be large enough.
void xor_shifted(std::vector<Word>& dst, std::span<const Word> src, std::uint64_t shift);

/// Strips zero words from the top.
void trim(std::vector<Word>& v) noexcept;

/// Degree of a trimmed packed polynomial, -1 for zero.
std::int64_t degree(std::span<const Word> v) noexcept;

}  // namespace lcf::detail::gf2
