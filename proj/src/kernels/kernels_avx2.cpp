// Compiled with -mavx2 on x86-64 only; reached through runtime dispatch.
#include "hidmap/kernels.hpp"

#if defined(HIDMAP_HAVE_AVX2)
#include <immintrin.h>

namespace hidmap::kernels::avx2 {

namespace {

// Two packed points per register: [x0, y0, x1, y1]. hadd of a pair of such
// products yields [p0, p2, p1, p3]; the permute restores point order. Each
// lane computes dx*nx + dy*ny in the same order as the scalar loop.
inline __m256d hsum_pairs(__m256d a, __m256d b) {
  return _mm256_permute4x64_pd(_mm256_hadd_pd(a, b), 0b11011000);
}

}  // namespace

void project(Point anchor, Point normal, std::span<const Point> points, std::span<double> out) {
  const double* src = reinterpret_cast<const double*>(points.data());
  const __m256d a = _mm256_setr_pd(anchor.x, anchor.y, anchor.x, anchor.y);
  const __m256d n = _mm256_setr_pd(normal.x, normal.y, normal.x, normal.y);
  std::size_t i = 0;
  for (; i + 4 <= points.size(); i += 4) {
    __m256d p01 = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(src + 2 * i), a), n);
    __m256d p23 = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(src + 2 * i + 4), a), n);
    _mm256_storeu_pd(out.data() + i, hsum_pairs(p01, p23));
  }
  scalar::project(anchor, normal, points.subspan(i), out.subspan(i));
}

void distances_from(Point origin, std::span<const Point> points, std::span<double> out) {
  const double* src = reinterpret_cast<const double*>(points.data());
  const __m256d o = _mm256_setr_pd(origin.x, origin.y, origin.x, origin.y);
  std::size_t i = 0;
  for (; i + 4 <= points.size(); i += 4) {
    __m256d d01 = _mm256_sub_pd(_mm256_loadu_pd(src + 2 * i), o);
    __m256d d23 = _mm256_sub_pd(_mm256_loadu_pd(src + 2 * i + 4), o);
    __m256d sq = hsum_pairs(_mm256_mul_pd(d01, d01), _mm256_mul_pd(d23, d23));
    _mm256_storeu_pd(out.data() + i, _mm256_sqrt_pd(sq));
  }
  scalar::distances_from(origin, points.subspan(i), out.subspan(i));
}

}  // namespace hidmap::kernels::avx2
#endif
