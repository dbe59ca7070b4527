#pragma once

#include <cmath>

namespace hidmap {

// Model coordinates, y up; the root polygon has circumradius 1 by default.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr Point operator*(Point a, double s) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point a, Point b) noexcept = default;
};

static_assert(sizeof(Point) == 2 * sizeof(double), "kernels rely on packed Point pairs");

constexpr double dot(Point a, Point b) noexcept { return a.x * b.x + a.y * b.y; }
// z component of a x b
constexpr double cross(Point a, Point b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) noexcept { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double distance(Point a, Point b) noexcept { return norm(a - b); }

}  // namespace hidmap
