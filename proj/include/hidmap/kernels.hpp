#pragma once

// Data-parallel inner loops shared by geometry, marble placement and the
// transition stepper. Every kernel has a scalar reference; SIMD variants are
// picked once at runtime and must be bit-identical to the reference (the
// project builds with -ffp-contract=off so no variant fuses multiply-adds).

#include <span>
#include <string_view>

#include "hidmap/point.hpp"

namespace hidmap::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

// The variant in use. HIDMAP_SIMD=scalar|avx2|neon overrides detection;
// an unsupported request falls back to scalar.
Isa active_isa() noexcept;
// True when `isa` is compiled in and the CPU reports support for it.
bool isa_available(Isa isa) noexcept;

// out[i] = (points[i] - anchor) . normal
void project(Point anchor, Point normal, std::span<const Point> points, std::span<double> out);
// out[i] = |points[i] - origin|
void distances_from(Point origin, std::span<const Point> points, std::span<double> out);
// Row-major |a| x |b| matrix of Euclidean distances.
void distance_matrix(std::span<const Point> a, std::span<const Point> b, std::span<double> out);

// Per-variant entry points, exposed for equivalence tests.
struct KernelTable {
  void (*project)(Point, Point, std::span<const Point>, std::span<double>);
  void (*distances_from)(Point, std::span<const Point>, std::span<double>);
};

const KernelTable& table(Isa isa) noexcept;

namespace scalar {
void project(Point anchor, Point normal, std::span<const Point> points, std::span<double> out);
void distances_from(Point origin, std::span<const Point> points, std::span<double> out);
}  // namespace scalar

#if defined(HIDMAP_HAVE_AVX2)
namespace avx2 {
void project(Point anchor, Point normal, std::span<const Point> points, std::span<double> out);
void distances_from(Point origin, std::span<const Point> points, std::span<double> out);
}  // namespace avx2
#endif

#if defined(HIDMAP_HAVE_NEON)
namespace neon {
void project(Point anchor, Point normal, std::span<const Point> points, std::span<double> out);
void distances_from(Point origin, std::span<const Point> points, std::span<double> out);
}  // namespace neon
#endif

}  // namespace hidmap::kernels
