#include "hidmap/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace hidmap::kernels {

namespace scalar {

void project(Point anchor, Point normal, std::span<const Point> points, std::span<double> out) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double dx = points[i].x - anchor.x;
    const double dy = points[i].y - anchor.y;
    out[i] = dx * normal.x + dy * normal.y;
  }
}

void distances_from(Point origin, std::span<const Point> points, std::span<double> out) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double dx = points[i].x - origin.x;
    const double dy = points[i].y - origin.y;
    out[i] = std::sqrt(dx * dx + dy * dy);
  }
}

}  // namespace scalar

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "scalar";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(HIDMAP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(HIDMAP_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

namespace {

constexpr KernelTable kScalarTable{&scalar::project, &scalar::distances_from};
#if defined(HIDMAP_HAVE_AVX2)
constexpr KernelTable kAvx2Table{&avx2::project, &avx2::distances_from};
#endif
#if defined(HIDMAP_HAVE_NEON)
constexpr KernelTable kNeonTable{&neon::project, &neon::distances_from};
#endif

Isa detect() noexcept {
  if (const char* forced = std::getenv("HIDMAP_SIMD")) {
    if (std::strcmp(forced, "scalar") == 0) return Isa::Scalar;
    if (std::strcmp(forced, "avx2") == 0) return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
    if (std::strcmp(forced, "neon") == 0) return isa_available(Isa::Neon) ? Isa::Neon : Isa::Scalar;
  }
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

}  // namespace

const KernelTable& table(Isa isa) noexcept {
  switch (isa) {
#if defined(HIDMAP_HAVE_AVX2)
    case Isa::Avx2: return kAvx2Table;
#endif
#if defined(HIDMAP_HAVE_NEON)
    case Isa::Neon: return kNeonTable;
#endif
    default: return kScalarTable;
  }
}

Isa active_isa() noexcept {
  static const Isa isa = detect();
  return isa;
}

namespace {
const KernelTable& active() noexcept {
  static const KernelTable& t = table(active_isa());
  return t;
}
}  // namespace

void project(Point anchor, Point normal, std::span<const Point> points, std::span<double> out) {
  active().project(anchor, normal, points, out);
}

void distances_from(Point origin, std::span<const Point> points, std::span<double> out) {
  active().distances_from(origin, points, out);
}

void distance_matrix(std::span<const Point> a, std::span<const Point> b, std::span<double> out) {
  const auto& t = active();
  for (std::size_t i = 0; i < a.size(); ++i) {
    t.distances_from(a[i], b, out.subspan(i * b.size(), b.size()));
  }
}

}  // namespace hidmap::kernels
