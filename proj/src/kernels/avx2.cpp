#include <immintrin.h>

#include "weilscope/kernels.hpp"

namespace weilscope::kernels {

namespace {

inline __m256i butterfly_in_register(__m256i v) {
  __m256i sw = _mm256_shuffle_epi32(v, _MM_SHUFFLE(2, 3, 0, 1));
  v = _mm256_blend_epi32(_mm256_add_epi32(v, sw), _mm256_sub_epi32(sw, v), 0xAA);
  sw = _mm256_shuffle_epi32(v, _MM_SHUFFLE(1, 0, 3, 2));
  v = _mm256_blend_epi32(_mm256_add_epi32(v, sw), _mm256_sub_epi32(sw, v), 0xCC);
  sw = _mm256_permute2x128_si256(v, v, 0x01);
  return _mm256_blend_epi32(_mm256_add_epi32(v, sw), _mm256_sub_epi32(sw, v), 0xF0);
}

void wht_avx2(std::int32_t* data, std::size_t n) {
  if (n < 8) {
    scalar_kernels().wht_i32(data, n);
    return;
  }
  for (std::size_t i = 0; i < n; i += 8) {
    auto* ptr = reinterpret_cast<__m256i*>(data + i);
    _mm256_storeu_si256(ptr, butterfly_in_register(_mm256_loadu_si256(ptr)));
  }
  for (std::size_t h = 8; h < n; h <<= 1)
    for (std::size_t i = 0; i < n; i += 2 * h)
      for (std::size_t j = i; j < i + h; j += 8) {
        auto* pa = reinterpret_cast<__m256i*>(data + j);
        auto* pb = reinterpret_cast<__m256i*>(data + j + h);
        __m256i a = _mm256_loadu_si256(pa), b = _mm256_loadu_si256(pb);
        _mm256_storeu_si256(pa, _mm256_add_epi32(a, b));
        _mm256_storeu_si256(pb, _mm256_sub_epi32(a, b));
      }
}

void rotate_accumulate_avx2(std::int32_t* out, const std::int32_t* in, std::size_t stride, std::uint32_t p,
                            std::uint32_t shift, std::size_t len) {
  for (std::uint32_t c = 0; c < p; ++c) {
    std::uint32_t src = c + shift;
    if (src >= p) src -= p;
    std::int32_t* o = out + c * stride;
    const std::int32_t* s = in + src * stride;
    std::size_t i = 0;
    for (; i + 8 <= len; i += 8) {
      auto* po = reinterpret_cast<__m256i*>(o + i);
      __m256i v = _mm256_add_epi32(_mm256_loadu_si256(po),
                                   _mm256_loadu_si256(reinterpret_cast<const __m256i*>(s + i)));
      _mm256_storeu_si256(po, v);
    }
    for (; i < len; ++i) o[i] += s[i];
  }
}

// x mod n for 0 <= x < 2^50 held exactly in doubles.
inline __m256d mod_pd(__m256d x, __m256d n, __m256d inv_n) {
  __m256d q = _mm256_floor_pd(_mm256_mul_pd(x, inv_n));
  __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(q, n));
  r = _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, _mm256_setzero_pd(), _CMP_LT_OQ), n));
  r = _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, n, _CMP_GE_OQ), n));
  return r;
}

inline __m256i mul_mod(__m256i a, __m256d s, __m256d n, __m256d inv_n) {
  __m256d lo = _mm256_cvtepi32_pd(_mm256_castsi256_si128(a));
  __m256d hi = _mm256_cvtepi32_pd(_mm256_extracti128_si256(a, 1));
  __m128i rlo = _mm256_cvttpd_epi32(mod_pd(_mm256_mul_pd(lo, s), n, inv_n));
  __m128i rhi = _mm256_cvttpd_epi32(mod_pd(_mm256_mul_pd(hi, s), n, inv_n));
  return _mm256_set_m128i(rhi, rlo);
}

void zech_profile_avx2(const std::uint32_t* zech, const std::uint32_t* ratio, std::uint32_t n, std::uint32_t s,
                       std::uint32_t begin, std::uint32_t end, std::uint32_t* out) {
  const __m256d vs = _mm256_set1_pd(static_cast<double>(s));
  const __m256d vn = _mm256_set1_pd(static_cast<double>(n));
  const __m256d inv_n = _mm256_set1_pd(1.0 / static_cast<double>(n));
  const __m256i nn = _mm256_set1_epi32(static_cast<int>(n));
  const __m256i none = _mm256_set1_epi32(-1);
  const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  const auto* z32 = reinterpret_cast<const int*>(zech);
  std::uint32_t k = begin;
  for (; k + 8 <= end; k += 8) {
    __m256i r = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ratio + k));
    __m256i u = mul_mod(r, vs, vn, inv_n);
    __m256i z = _mm256_i32gather_epi32(z32, u, 4);
    __m256i kk = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(k)), lane);
    __m256i ks = mul_mod(kk, vs, vn, inv_n);
    __m256i l = _mm256_add_epi32(ks, z);
    // l in [0, 2n); subtract n where l >= n.
    __m256i ge = _mm256_cmpgt_epi32(l, _mm256_sub_epi32(nn, _mm256_set1_epi32(1)));
    l = _mm256_sub_epi32(l, _mm256_and_si256(ge, nn));
    l = _mm256_blendv_epi8(l, none, _mm256_cmpeq_epi32(z, none));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + (k - begin)), l);
  }
  if (k < end) scalar_kernels().zech_profile_logs(zech, ratio, n, s, k, end, out + (k - begin));
}

const KernelTable kAvx2{Isa::Avx2, wht_avx2, rotate_accumulate_avx2, zech_profile_avx2};

}  // namespace

const KernelTable* avx2_kernels() noexcept { return &kAvx2; }

}  // namespace weilscope::kernels
