#include "gf2_kernels.hpp"

#include <algorithm>
#include <bit>

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#include <immintrin.h>
#define LCF_HAVE_PCLMUL_DISPATCH 1
#endif

namespace lcf::detail::gf2 {
namespace {

constexpr std::size_t kKaratsubaThreshold = 24;

void clmul64_portable(Word a, Word b, Word& lo, Word& hi) noexcept {
  Word l = 0;
  Word h = 0;
  for (int i = 0; i < 64; ++i) {
    const Word mask = Word{0} - ((a >> i) & 1U);
    l ^= (b << i) & mask;
    if (i != 0) h ^= (b >> (64 - i)) & mask;
  }
  lo = l;
  hi = h;
}

#ifdef LCF_HAVE_PCLMUL_DISPATCH
__attribute__((target("pclmul,sse2"))) void clmul64_hw(Word a, Word b, Word& lo,
                                                      Word& hi) noexcept {
  const __m128i va = _mm_set_epi64x(0, static_cast<long long>(a));
  const __m128i vb = _mm_set_epi64x(0, static_cast<long long>(b));
  const __m128i r = _mm_clmulepi64_si128(va, vb, 0x00);
  lo = static_cast<Word>(_mm_cvtsi128_si64(r));
  hi = static_cast<Word>(_mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)));
}

bool cpu_has_pclmul() noexcept {
  static const bool has = __builtin_cpu_supports("pclmul");
  return has;
}
#endif

// out[0 .. na+nb) ^= a * b
void basecase_accumulate(const Word* a, std::size_t na, const Word* b, std::size_t nb,
                         Word* out) noexcept {
  for (std::size_t i = 0; i < na; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < nb; ++j) {
      Word lo;
      Word hi;
      clmul64(a[i], b[j], lo, hi);
      out[i + j] ^= lo;
      out[i + j + 1] ^= hi;
    }
  }
}

// out[0 .. 2n) = a * b, with a and b both n words.
void karatsuba(const Word* a, const Word* b, std::size_t n, Word* out) {
  if (n < kKaratsubaThreshold) {
    std::fill(out, out + 2 * n, Word{0});
    basecase_accumulate(a, n, b, n, out);
    return;
  }
  const std::size_t lo = n / 2;
  const std::size_t hi = n - lo;  // hi >= lo

  std::vector<Word> z0(2 * lo);
  std::vector<Word> z2(2 * hi);
  karatsuba(a, b, lo, z0.data());
  karatsuba(a + lo, b + lo, hi, z2.data());

  std::vector<Word> sa(hi);
  std::vector<Word> sb(hi);
  for (std::size_t i = 0; i < hi; ++i) {
    sa[i] = a[lo + i] ^ (i < lo ? a[i] : 0);
    sb[i] = b[lo + i] ^ (i < lo ? b[i] : 0);
  }
  std::vector<Word> z1(2 * hi);
  karatsuba(sa.data(), sb.data(), hi, z1.data());
  for (std::size_t i = 0; i < z0.size(); ++i) z1[i] ^= z0[i];
  for (std::size_t i = 0; i < z2.size(); ++i) z1[i] ^= z2[i];

  std::fill(out, out + 2 * n, Word{0});
  for (std::size_t i = 0; i < z0.size(); ++i) out[i] ^= z0[i];
  for (std::size_t i = 0; i < z2.size(); ++i) out[2 * lo + i] ^= z2[i];
  for (std::size_t i = 0; i < z1.size(); ++i) out[lo + i] ^= z1[i];
}

}  // namespace

void clmul64(Word a, Word b, Word& lo, Word& hi) noexcept {
#ifdef LCF_HAVE_PCLMUL_DISPATCH
  if (cpu_has_pclmul()) {
    clmul64_hw(a, b, lo, hi);
    return;
  }
#endif
  clmul64_portable(a, b, lo, hi);
}

void trim(std::vector<Word>& v) noexcept {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

std::int64_t degree(std::span<const Word> v) noexcept {
  if (v.empty()) return -1;
  return static_cast<std::int64_t>(64 * (v.size() - 1)) + 63 -
         std::countl_zero(v.back());
}

std::vector<Word> multiply_schoolbook(std::span<const Word> a, std::span<const Word> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Word> out(a.size() + b.size(), 0);
  basecase_accumulate(a.data(), a.size(), b.data(), b.size(), out.data());
  trim(out);
  return out;
}

std::vector<Word> multiply(std::span<const Word> a, std::span<const Word> b) {
  if (a.empty() || b.empty()) return {};
  if (a.size() < b.size()) std::swap(a, b);
  const std::size_t n = b.size();
  if (n < kKaratsubaThreshold) return multiply_schoolbook(a, b);

  // Unbalanced operands: cut the longer one into n-word chunks.
  std::vector<Word> out(a.size() + n + 1, 0);
  std::vector<Word> chunk(n);
  std::vector<Word> prod(2 * n);
  for (std::size_t off = 0; off < a.size(); off += n) {
    const std::size_t len = std::min(n, a.size() - off);
    std::fill(chunk.begin(), chunk.end(), Word{0});
    std::copy_n(a.data() + off, len, chunk.begin());
    karatsuba(chunk.data(), b.data(), n, prod.data());
    for (std::size_t i = 0; i < 2 * n && off + i < out.size(); ++i) out[off + i] ^= prod[i];
  }
  trim(out);
  return out;
}

void xor_shifted(std::vector<Word>& dst, std::span<const Word> src, std::uint64_t shift) {
  const std::size_t ws = shift / 64;
  const unsigned bs = shift % 64;
  if (bs == 0) {
    for (std::size_t i = 0; i < src.size(); ++i) dst[ws + i] ^= src[i];
    return;
  }
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[ws + i] ^= src[i] << bs;
    const Word carry = src[i] >> (64 - bs);
    if (carry != 0) dst[ws + i + 1] ^= carry;
  }
}

}  // namespace lcf::detail::gf2
