#include "hidmap/marbles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hidmap/kernels.hpp"

namespace hidmap {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

PlacementRng::PlacementRng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed ^ splitmix64(stream))) {}

double PlacementRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

namespace marbles {

int marble_count(double fraction, int total) noexcept {
  return static_cast<int>(std::floor(static_cast<double>(total) * fraction + 0.5));
}

int marble_count(Count count, Count whole, int total) noexcept {
  if (whole == 0) return 0;
  const auto t = static_cast<Count>(total);
  return static_cast<int>((2 * t * count + whole) / (2 * whole));
}

std::vector<std::size_t> group_sizes(std::size_t count) {
  std::vector<std::size_t> out(count / kGroupSize, kGroupSize);
  if (count % kGroupSize) out.push_back(count % kGroupSize);
  return out;
}

namespace {

// Centre first, then the four diagonal neighbours.
std::vector<Point> quincunx(Point anchor, std::size_t size, double radius) {
  const double d = kClusterSpacing * radius / std::sqrt(2.0);
  const Point offsets[kGroupSize] = {{0, 0}, {-d, d}, {d, d}, {d, -d}, {-d, -d}};
  std::vector<Point> pts;
  for (std::size_t i = 0; i < size; ++i) pts.push_back(anchor + offsets[i]);
  return pts;
}

struct Placer {
  const ConvexPolygon& region;  // marble centres must lie here (poly inset by radius)
  double radius;
  PlacementRng rng;
  double min_x, max_x, min_y, max_y;
  std::vector<Point> placed;
  std::vector<double> scratch;

  Placer(const ConvexPolygon& r, double rad, PlacementRng g) : region(r), radius(rad), rng(g) {
    min_x = max_x = r[0].x;
    min_y = max_y = r[0].y;
    for (const Point& p : r.vertices()) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
  }

  Point sample() { return {rng.uniform(min_x, max_x), rng.uniform(min_y, max_y)}; }

  bool inside(std::span<const Point> pts) {
    scratch.resize(pts.size());
    edge_margins(region, pts, scratch);
    return std::all_of(scratch.begin(), scratch.end(), [](double m) { return m >= 0.0; });
  }

  bool clear_of(std::span<const Point> pts, std::span<const Point> others) {
    scratch.resize(others.size());
    for (const Point& p : pts) {
      kernels::distances_from(p, others, scratch);
      for (double d : scratch) {
        if (d < 2.0 * radius) return false;
      }
    }
    return true;
  }
};

}  // namespace

std::vector<Marble> place_marbles(const ConvexPolygon& poly, std::size_t count, double radius,
                                  std::uint64_t seed, std::uint64_t node_id) {
  if (count == 0) return {};
  auto region = inset_polygon(poly, radius);
  if (!region) {
    throw Error(ErrorCode::PolygonTooSmall, "polygon cannot contain a marble of this radius");
  }
  Placer placer(*region, radius, PlacementRng(seed, node_id));
  const Point fallback = centroid(*region);

  std::vector<Marble> out;
  out.reserve(count);
  const auto sizes = group_sizes(count);
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    std::vector<Point> group;
    for (int attempt = 0; attempt < kAttemptsPerStage && group.empty(); ++attempt) {
      auto candidate = quincunx(placer.sample(), sizes[g], radius);
      if (placer.inside(candidate) && placer.clear_of(candidate, placer.placed)) {
        group = std::move(candidate);
      }
    }
    if (group.empty()) {
      // individually, still non-overlapping
      for (std::size_t m = 0; m < sizes[g]; ++m) {
        std::optional<Point> spot;
        for (int attempt = 0; attempt < kAttemptsPerStage && !spot; ++attempt) {
          const Point p = placer.sample();
          const Point one[1] = {p};
          if (placer.inside(one) && placer.clear_of(one, placer.placed) && placer.clear_of(one, group)) {
            spot = p;
          }
        }
        if (!spot) {
          // overlap allowed now; containment never is
          for (int attempt = 0; attempt < kAttemptsPerStage && !spot; ++attempt) {
            const Point p = placer.sample();
            const Point one[1] = {p};
            if (placer.inside(one)) spot = p;
          }
        }
        group.push_back(spot.value_or(fallback));
      }
    }
    for (const Point& p : group) {
      out.push_back({static_cast<std::uint32_t>(out.size()), p, radius, static_cast<std::uint32_t>(g)});
      placer.placed.push_back(p);
    }
  }
  return out;
}

Matching assign_targets(std::span<const Point> old_points, std::span<const Point> new_points) {
  const std::size_t a = old_points.size(), b = new_points.size();
  std::vector<double> dist(a * b);
  kernels::distance_matrix(old_points, new_points, dist);
  std::vector<std::size_t> order(a * b);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // index = old * b + new, so ties already fall back to (old, new) order
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return dist[x] < dist[y]; });

  Matching m;
  std::vector<bool> old_used(a, false), new_used(b, false);
  const std::size_t want = std::min(a, b);
  for (std::size_t idx : order) {
    if (m.pairs.size() == want) break;
    const std::size_t i = idx / b, j = idx % b;
    if (old_used[i] || new_used[j]) continue;
    old_used[i] = new_used[j] = true;
    m.pairs.emplace_back(i, j);
    m.total_distance += dist[idx];
  }
  for (std::size_t i = 0; i < a; ++i) {
    if (!old_used[i]) m.fade_out.push_back(i);
  }
  for (std::size_t j = 0; j < b; ++j) {
    if (!new_used[j]) m.fade_in.push_back(j);
  }
  return m;
}

}  // namespace marbles
}  // namespace hidmap
