#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hidmap/error.hpp"
#include "hidmap/point.hpp"

namespace hidmap {

struct GeometryConfig {
  double area_tolerance = 1e-9;  // relative, per slab fraction
  int max_bisection_iters = 64;
  double degenerate_eps = 1e-12;
};

// Clockwise (in y-up coordinates) convex polygon with at least three vertices.
class ConvexPolygon {
 public:
  // Throws InvalidPolygon when the vertices are not a clockwise convex ring.
  explicit ConvexPolygon(std::vector<Point> vertices, double eps = 1e-12);

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }
  // Edge i runs from vertex i to vertex i+1 (wrapping).
  Point edge_start(std::size_t i) const { return vertices_[i]; }
  Point edge_end(std::size_t i) const { return vertices_[(i + 1) % vertices_.size()]; }

  friend bool operator==(const ConvexPolygon&, const ConvexPolygon&) = default;

 private:
  std::vector<Point> vertices_;
};

struct Segment {
  Point a;
  Point b;
  friend bool operator==(const Segment&, const Segment&) = default;
};

// The line family parallel to one root side. Offsets are measured along
// `inward_normal` from the side's supporting line through `anchor`.
struct CutDirection {
  Point direction;
  Point inward_normal;
  Point anchor;

  double offset_of(Point p) const noexcept { return dot(p - anchor, inward_normal); }
  CutDirection flipped() const noexcept { return {direction * -1.0, inward_normal * -1.0, anchor}; }
};

// Vertex j sits at angle 90deg - j*360deg/sides: vertex 0 at the top, then clockwise.
ConvexPolygon regular_polygon(int sides, double circumradius = 1.0);
// The cut family of side `side` (joining vertices side, side+1) of a clockwise polygon.
CutDirection side_cut(const ConvexPolygon& poly, std::size_t side);

double area(const ConvexPolygon& poly) noexcept;
double signed_area(std::span<const Point> ring) noexcept;
Point centroid(const ConvexPolygon& poly) noexcept;
double longest_edge(const ConvexPolygon& poly) noexcept;
bool contains_point(const ConvexPolygon& poly, Point p, double eps = 1e-12) noexcept;
// Distance from p to the nearest point on the boundary (inside or outside).
double nearest_edge_distance(const ConvexPolygon& poly, Point p) noexcept;
double segment_distance(const Segment& s, Point p) noexcept;
// Signed distance to the boundary for each point: positive inside, negative outside.
// Exact inside; outside it is the distance to the farthest violated edge line.
void edge_margins(const ConvexPolygon& poly, std::span<const Point> points, std::span<double> out);

struct OffsetRange {
  double lo;
  double hi;
};
OffsetRange offset_range(const ConvexPolygon& poly, const CutDirection& cut) noexcept;

// Keeps { q : cut.offset_of(q) <= offset }. Empty when the kept area is below eps.
std::optional<ConvexPolygon> clip_half_plane(const ConvexPolygon& poly, const CutDirection& cut,
                                             double offset, double eps = 1e-12);
// Intersection of the polygon with the line at `offset`; empty if the line misses it.
std::optional<Segment> chord(const ConvexPolygon& poly, const CutDirection& cut, double offset);
// Inner parallel body: points at distance >= inset from every edge line.
std::optional<ConvexPolygon> inset_polygon(const ConvexPolygon& poly, double inset,
                                           double eps = 1e-12);

struct SplitResult {
  // slabs[i] holds fraction i; the first slab is nearest the cut's anchor side.
  std::vector<std::optional<ConvexPolygon>> slabs;
  // Offsets of the boundaries of each slab along the cut normal.
  std::vector<OffsetRange> bounds;
  int max_iterations = 0;
};

// Throws BadFractions if any fraction is negative or the sum is not 1 within 1e-9.
SplitResult split_proportional(const ConvexPolygon& poly, const CutDirection& cut,
                               std::span<const double> fractions, const GeometryConfig& cfg = {});

}  // namespace hidmap
