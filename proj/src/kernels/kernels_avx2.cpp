#include "nervekit/kernels.hpp"

#include <immintrin.h>

#include <algorithm>

#define NK_AVX2 __attribute__((target("avx2")))

namespace nervekit::kernels {

namespace {

NK_AVX2 void add_constant(const std::int32_t* in, std::int32_t add, std::int32_t* out,
                          std::size_t count) {
  const __m256i va = _mm256_set1_epi32(add);
  std::size_t i = 0;
  for (; i + 8 <= count; i += 8) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), _mm256_add_epi32(v, va));
  }
  for (; i < count; ++i) out[i] = in[i] + add;
}

NK_AVX2 void neighbor_probe(const std::int32_t* const* coords, const std::int32_t* offset,
                            const ProbeGeometry& g, std::int32_t* out, std::size_t count) {
  const __m256i minus_one = _mm256_set1_epi32(-1);
  std::size_t i = 0;
  for (; i + 8 <= count; i += 8) {
    __m256i idx = _mm256_setzero_si256();
    __m256i bad = _mm256_setzero_si256();
    for (int k = 0; k < g.dim; ++k) {
      __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(coords[k] + i));
      c = _mm256_add_epi32(c, _mm256_set1_epi32(offset[k]));
      // c < 0 or c >= extent
      bad = _mm256_or_si256(bad, _mm256_cmpgt_epi32(_mm256_setzero_si256(), c));
      bad = _mm256_or_si256(bad, _mm256_cmpgt_epi32(c, _mm256_set1_epi32(g.extent[k] - 1)));
      idx = _mm256_add_epi32(idx, _mm256_mullo_epi32(c, _mm256_set1_epi32(g.stride[k])));
    }
    const __m256i good = _mm256_xor_si256(bad, minus_one);
    idx = _mm256_and_si256(idx, good);
    __m256i hit = _mm256_mask_i32gather_epi32(minus_one, g.table, idx, good, 4);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), hit);
  }
  if (i < count) {
    const std::int32_t* tail[8];
    for (int k = 0; k < g.dim; ++k) tail[k] = coords[k] + i;
    scalar_table().neighbor_probe(tail, offset, g, out + i, count - i);
  }
}

NK_AVX2 void minmax(const std::int32_t* in, std::size_t count, std::int32_t* lo,
                    std::int32_t* hi) {
  if (count == 0) return;
  std::size_t i = 0;
  std::int32_t mn = in[0], mx = in[0];
  if (count >= 8) {
    __m256i vmin = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in));
    __m256i vmax = vmin;
    for (i = 8; i + 8 <= count; i += 8) {
      __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + i));
      vmin = _mm256_min_epi32(vmin, v);
      vmax = _mm256_max_epi32(vmax, v);
    }
    alignas(32) std::int32_t a[8], b[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(a), vmin);
    _mm256_store_si256(reinterpret_cast<__m256i*>(b), vmax);
    mn = *std::min_element(a, a + 8);
    mx = *std::max_element(b, b + 8);
  }
  for (; i < count; ++i) {
    mn = std::min(mn, in[i]);
    mx = std::max(mx, in[i]);
  }
  *lo = mn;
  *hi = mx;
}

}  // namespace

const Table& avx2_table() {
  static const Table t{add_constant, neighbor_probe, minmax};
  return t;
}

}  // namespace nervekit::kernels
