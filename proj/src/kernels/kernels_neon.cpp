// AArch64 variant; Advanced SIMD is baseline there, so no runtime probe.
#include "hidmap/kernels.hpp"

#if defined(HIDMAP_HAVE_NEON)
#include <arm_neon.h>

namespace hidmap::kernels::neon {

void project(Point anchor, Point normal, std::span<const Point> points, std::span<double> out) {
  const double* src = reinterpret_cast<const double*>(points.data());
  const float64x2_t ax = vdupq_n_f64(anchor.x), ay = vdupq_n_f64(anchor.y);
  const float64x2_t nx = vdupq_n_f64(normal.x), ny = vdupq_n_f64(normal.y);
  std::size_t i = 0;
  for (; i + 2 <= points.size(); i += 2) {
    // vld2 de-interleaves into xs and ys
    float64x2x2_t p = vld2q_f64(src + 2 * i);
    float64x2_t tx = vmulq_f64(vsubq_f64(p.val[0], ax), nx);
    float64x2_t ty = vmulq_f64(vsubq_f64(p.val[1], ay), ny);
    vst1q_f64(out.data() + i, vaddq_f64(tx, ty));
  }
  scalar::project(anchor, normal, points.subspan(i), out.subspan(i));
}

void distances_from(Point origin, std::span<const Point> points, std::span<double> out) {
  const double* src = reinterpret_cast<const double*>(points.data());
  const float64x2_t ox = vdupq_n_f64(origin.x), oy = vdupq_n_f64(origin.y);
  std::size_t i = 0;
  for (; i + 2 <= points.size(); i += 2) {
    float64x2x2_t p = vld2q_f64(src + 2 * i);
    float64x2_t dx = vsubq_f64(p.val[0], ox);
    float64x2_t dy = vsubq_f64(p.val[1], oy);
    float64x2_t sq = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
    vst1q_f64(out.data() + i, vsqrtq_f64(sq));
  }
  scalar::distances_from(origin, points.subspan(i), out.subspan(i));
}

}  // namespace hidmap::kernels::neon
#endif
