#include "hidmap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hidmap/kernels.hpp"

namespace hidmap {

ConvexPolygon::ConvexPolygon(std::vector<Point> vertices, double eps) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw Error(ErrorCode::InvalidPolygon, "polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = vertices_[i];
    const Point b = vertices_[(i + 1) % n];
    const Point c = vertices_[(i + 2) % n];
    if (!std::isfinite(a.x) || !std::isfinite(a.y)) {
      throw Error(ErrorCode::InvalidPolygon, "non-finite vertex");
    }
    if (distance(a, b) <= eps) {
      throw Error(ErrorCode::InvalidPolygon, "coincident vertices at index " + std::to_string(i));
    }
    // clockwise: every turn is to the right (or straight)
    if (cross(b - a, c - b) > eps) {
      throw Error(ErrorCode::InvalidPolygon, "polygon is not convex and clockwise at vertex " +
                                                 std::to_string((i + 1) % n));
    }
  }
  if (signed_area(vertices_) >= 0.0) {
    throw Error(ErrorCode::InvalidPolygon, "polygon is not clockwise");
  }
}

ConvexPolygon regular_polygon(int sides, double circumradius) {
  if (sides < 3) throw Error(ErrorCode::TooFewSides, "a polygon needs at least 3 sides");
  if (!(circumradius > 0.0)) throw Error(ErrorCode::InvalidPolygon, "circumradius must be positive");
  std::vector<Point> v;
  v.reserve(static_cast<std::size_t>(sides));
  for (int j = 0; j < sides; ++j) {
    // Quarter turns are exact so the square example lands on integers.
    if ((4 * j) % sides == 0) {
      static constexpr Point quarter[4] = {{0, 1}, {1, 0}, {0, -1}, {-1, 0}};
      const Point q = quarter[(4 * j / sides) % 4];
      v.push_back({circumradius * q.x, circumradius * q.y});
      continue;
    }
    const double angle = std::numbers::pi / 2.0 - 2.0 * std::numbers::pi * j / sides;
    v.push_back({circumradius * std::cos(angle), circumradius * std::sin(angle)});
  }
  return ConvexPolygon(std::move(v));
}

CutDirection side_cut(const ConvexPolygon& poly, std::size_t side) {
  const Point a = poly.edge_start(side);
  const Point b = poly.edge_end(side);
  const Point d = b - a;
  const double len = norm(d);
  const Point dir{d.x / len, d.y / len};
  // Interior lies to the right of a clockwise edge.
  return {dir, {dir.y, -dir.x}, a};
}

double signed_area(std::span<const Point> ring) noexcept {
  double twice = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) twice += cross(ring[i], ring[(i + 1) % n]);
  return 0.5 * twice;
}

double area(const ConvexPolygon& poly) noexcept { return std::abs(signed_area(poly.vertices())); }

Point centroid(const ConvexPolygon& poly) noexcept {
  const auto& v = poly.vertices();
  const Point o = v.front();
  double cx = 0.0, cy = 0.0, twice = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double w = cross(v[i] - o, v[i + 1] - o);
    cx += w * (v[i].x + v[i + 1].x - 2 * o.x);
    cy += w * (v[i].y + v[i + 1].y - 2 * o.y);
    twice += w;
  }
  return {o.x + cx / (3.0 * twice), o.y + cy / (3.0 * twice)};
}

double longest_edge(const ConvexPolygon& poly) noexcept {
  double best = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    best = std::max(best, distance(poly.edge_start(i), poly.edge_end(i)));
  }
  return best;
}

void edge_margins(const ConvexPolygon& poly, std::span<const Point> points, std::span<double> out) {
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(points.size()),
            std::numeric_limits<double>::infinity());
  std::vector<double> h(points.size());
  for (std::size_t e = 0; e < poly.size(); ++e) {
    const CutDirection c = side_cut(poly, e);
    kernels::project(c.anchor, c.inward_normal, points, h);
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = std::min(out[i], h[i]);
  }
}

bool contains_point(const ConvexPolygon& poly, Point p, double eps) noexcept {
  for (std::size_t e = 0; e < poly.size(); ++e) {
    const CutDirection c = side_cut(poly, e);
    if (c.offset_of(p) < -eps) return false;
  }
  return true;
}

double segment_distance(const Segment& s, Point p) noexcept {
  const Point d = s.b - s.a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, s.a);
  const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return distance(p, s.a + t * d);
}

double nearest_edge_distance(const ConvexPolygon& poly, Point p) noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < poly.size(); ++e) {
    best = std::min(best, segment_distance({poly.edge_start(e), poly.edge_end(e)}, p));
  }
  return best;
}

OffsetRange offset_range(const ConvexPolygon& poly, const CutDirection& cut) noexcept {
  std::vector<double> h(poly.size());
  kernels::project(cut.anchor, cut.inward_normal, poly.vertices(), h);
  auto [lo, hi] = std::minmax_element(h.begin(), h.end());
  return {*lo, *hi};
}

namespace {

// Drops vertices closer than eps to their predecessor.
std::vector<Point> dedupe(std::vector<Point> ring, double eps) {
  std::vector<Point> out;
  out.reserve(ring.size());
  for (const Point& p : ring) {
    if (out.empty() || distance(out.back(), p) > eps) out.push_back(p);
  }
  while (out.size() > 1 && distance(out.front(), out.back()) <= eps) out.pop_back();
  return out;
}

// Removes vertices whose turn is to the left within tolerance; these only
// arise from rounding at near-collinear intersections.
std::vector<Point> drop_reflex(std::vector<Point> ring, double eps) {
  bool changed = true;
  while (changed && ring.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < ring.size() && ring.size() >= 3; ++i) {
      const std::size_t n = ring.size();
      const Point a = ring[(i + n - 1) % n];
      const Point b = ring[i];
      const Point c = ring[(i + 1) % n];
      if (cross(b - a, c - b) > eps) {
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
      }
    }
  }
  return ring;
}

std::optional<ConvexPolygon> make_polygon(std::vector<Point> ring, double eps) {
  ring = drop_reflex(dedupe(std::move(ring), eps), eps);
  if (ring.size() < 3) return std::nullopt;
  if (-signed_area(ring) < eps) return std::nullopt;
  return ConvexPolygon(std::move(ring), eps);
}

// Vertices of poly ∩ { h <= offset } without validation.
std::vector<Point> clip_ring(const ConvexPolygon& poly, const CutDirection& cut, double offset,
                             bool& all_in) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  std::vector<double> h(n);
  kernels::project(cut.anchor, cut.inward_normal, v, h);
  all_in = true;
  bool all_out = true;
  for (double& x : h) {
    x -= offset;
    all_in = all_in && x <= 0.0;
    all_out = all_out && x > 0.0;
  }
  std::vector<Point> ring;
  if (all_in || all_out) return ring;
  ring.reserve(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    if (h[i] <= 0.0) ring.push_back(v[i]);
    if ((h[i] < 0.0 && h[j] > 0.0) || (h[i] > 0.0 && h[j] < 0.0)) {
      const double t = h[i] / (h[i] - h[j]);
      ring.push_back(v[i] + t * (v[j] - v[i]));
    }
  }
  return ring;
}

}  // namespace

std::optional<ConvexPolygon> clip_half_plane(const ConvexPolygon& poly, const CutDirection& cut,
                                             double offset, double eps) {
  bool all_in = false;
  auto ring = clip_ring(poly, cut, offset, all_in);
  if (all_in) return poly;
  if (ring.empty()) return std::nullopt;
  return make_polygon(std::move(ring), eps);
}

std::optional<Segment> chord(const ConvexPolygon& poly, const CutDirection& cut, double offset) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  std::vector<double> h(n);
  kernels::project(cut.anchor, cut.inward_normal, v, h);
  std::vector<Point> hits;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const double hi = h[i] - offset, hj = h[j] - offset;
    if (hi == 0.0) hits.push_back(v[i]);
    if ((hi < 0.0 && hj > 0.0) || (hi > 0.0 && hj < 0.0)) {
      const double t = hi / (hi - hj);
      hits.push_back(v[i] + t * (v[j] - v[i]));
    }
  }
  if (hits.size() < 2) return std::nullopt;
  auto [lo, hi] = std::minmax_element(hits.begin(), hits.end(), [&](Point a, Point b) {
    return dot(a, cut.direction) < dot(b, cut.direction);
  });
  if (distance(*lo, *hi) == 0.0) return std::nullopt;
  return Segment{*lo, *hi};
}

std::optional<ConvexPolygon> inset_polygon(const ConvexPolygon& poly, double inset, double eps) {
  std::optional<ConvexPolygon> current = poly;
  for (std::size_t e = 0; e < poly.size() && current; ++e) {
    const CutDirection c = side_cut(poly, e).flipped();
    current = clip_half_plane(*current, c, -inset, eps);
  }
  return current;
}

SplitResult split_proportional(const ConvexPolygon& poly, const CutDirection& cut,
                               std::span<const double> fractions, const GeometryConfig& cfg) {
  if (fractions.empty()) throw Error(ErrorCode::BadFractions, "no fractions given");
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0) || !std::isfinite(f)) {
      throw Error(ErrorCode::BadFractions, "fractions must be finite and non-negative");
    }
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::BadFractions, "fractions must sum to 1");
  }

  const std::size_t k = fractions.size();
  const double total = area(poly);
  const OffsetRange range = offset_range(poly, cut);
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (fractions[i] > 0.0) last_nonzero = i;
  }

  SplitResult result;
  result.slabs.resize(k);
  result.bounds.resize(k);
  const double tol = 0.25 * cfg.area_tolerance * total;

  auto kept_area = [&](double t) {
    bool all_in = false;
    auto ring = clip_ring(poly, cut, t, all_in);
    return all_in ? total : std::abs(signed_area(ring));
  };

  double prev = range.lo;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    cumulative += fractions[i];
    double upper = range.hi;
    if (fractions[i] == 0.0) {
      upper = i < last_nonzero ? prev : range.hi;
      result.bounds[i] = {i < last_nonzero ? prev : range.hi, upper};
      continue;
    }
    if (i < last_nonzero) {
      const double target = cumulative * total;
      double lo = prev, hi = range.hi;
      int iters = 0;
      double mid = 0.5 * (lo + hi);
      while (iters < cfg.max_bisection_iters) {
        mid = 0.5 * (lo + hi);
        ++iters;
        const double a = kept_area(mid);
        if (std::abs(a - target) <= tol) break;
        if (mid <= lo || mid >= hi) break;
        (a < target ? lo : hi) = mid;
      }
      result.max_iterations = std::max(result.max_iterations, iters);
      upper = mid;
    }

    std::optional<ConvexPolygon> slab = poly;
    if (upper < range.hi) slab = clip_half_plane(*slab, cut, upper, cfg.degenerate_eps);
    if (slab && prev > range.lo) {
      slab = clip_half_plane(*slab, cut.flipped(), -prev, cfg.degenerate_eps);
    }
    result.slabs[i] = std::move(slab);
    result.bounds[i] = {prev, upper};
    prev = upper;
  }
  return result;
}

}  // namespace hidmap
