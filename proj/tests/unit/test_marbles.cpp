#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hidmap/error.hpp"
#include "hidmap/marbles.hpp"

using namespace hidmap;
using namespace hidmap::marbles;

namespace {

ConvexPolygon unit_square() { return ConvexPolygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}); }

void check_layout(const ConvexPolygon& poly, const std::vector<Marble>& ms, double r) {
  for (std::size_t i = 0; i < ms.size(); ++i) {
    CHECK(contains_point(poly, ms[i].position));
    CHECK(nearest_edge_distance(poly, ms[i].position) >= r * (1 - 1e-9));
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      CHECK(distance(ms[i].position, ms[j].position) >= 2 * r - 1e-12);
    }
  }
}

double optimal_total(const std::vector<Point>& a, const std::vector<Point>& b) {
  // Permute the larger side and match its first |small| entries.
  const bool a_small = a.size() <= b.size();
  const auto& small = a_small ? a : b;
  const auto& large = a_small ? b : a;
  std::vector<std::size_t> perm(large.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double t = 0;
    for (std::size_t i = 0; i < small.size(); ++i) t += distance(small[i], large[perm[i]]);
    best = std::min(best, t);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("marble counts round half up") {
  CHECK(marble_count(0.074) == 7);
  CHECK(marble_count(0.004) == 0);
  CHECK(marble_count(0.005) == 1);
  CHECK(marble_count(1.0) == 100);
  CHECK(marble_count(0.0) == 0);
  CHECK(marble_count(Count{37}, Count{500}) == 7);
  CHECK(marble_count(Count{1}, Count{200}) == 1);   // exactly 0.5 marbles
  CHECK(marble_count(Count{1}, Count{201}) == 0);
  CHECK(marble_count(Count{3}, Count{8}, 4) == 2);  // 1.5
  CHECK(marble_count(Count{0}, Count{0}) == 0);
}

TEST_CASE("groups of five") {
  CHECK(group_sizes(0).empty());
  CHECK(group_sizes(7) == std::vector<std::size_t>{5, 2});
  CHECK(group_sizes(10) == std::vector<std::size_t>{5, 5});
  CHECK(group_sizes(3) == std::vector<std::size_t>{3});
}

TEST_CASE("placement in the unit square") {
  const auto sq = unit_square();
  const double r = 0.02;
  CHECK(place_marbles(sq, 0, r, 1, 1).empty());
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto ms = place_marbles(sq, 25, r, seed, 77);
    REQUIRE(ms.size() == 25);
    check_layout(sq, ms, r);
    for (std::size_t i = 0; i < ms.size(); ++i) {
      CHECK(ms[i].id == i);
      CHECK(ms[i].radius == r);
      CHECK(ms[i].group == i / 5);
    }
  }
}

TEST_CASE("quincunx groups when there is room") {
  const auto ms = place_marbles(unit_square(), 5, 0.02, 3, 4);
  const Point c = ms[0].position;
  for (std::size_t i = 1; i < 5; ++i) {
    CHECK(distance(ms[i].position, c) == doctest::Approx(2.2 * 0.02).epsilon(1e-9));
  }
}

TEST_CASE("placement is deterministic and depends on seed and node") {
  const auto sq = unit_square();
  const auto a = place_marbles(sq, 12, 0.02, 5, 9);
  const auto b = place_marbles(sq, 12, 0.02, 5, 9);
  const auto c = place_marbles(sq, 12, 0.02, 6, 9);
  const auto d = place_marbles(sq, 12, 0.02, 5, 10);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].position == b[i].position);
  CHECK(a[0].position != c[0].position);
  CHECK(a[0].position != d[0].position);
}

TEST_CASE("crowded and tiny polygons") {
  // Thin sliver: groups cannot fit, singles can.
  const ConvexPolygon sliver({{0, 0}, {0, 0.05}, {2, 0.05}, {2, 0}});
  const auto ms = place_marbles(sliver, 8, 0.02, 1, 2);
  CHECK(ms.size() == 8);
  for (const auto& m : ms) CHECK(nearest_edge_distance(sliver, m.position) >= 0.02 * (1 - 1e-9));

  // More marbles than fit: overlap is allowed, containment is not.
  const ConvexPolygon small({{0, 0}, {0, 0.1}, {0.1, 0.1}, {0.1, 0}});
  const auto crowd = place_marbles(small, 20, 0.02, 1, 2);
  CHECK(crowd.size() == 20);
  for (const auto& m : crowd) CHECK(nearest_edge_distance(small, m.position) >= 0.02 * (1 - 1e-9));

  const ConvexPolygon tiny({{0, 0}, {0, 0.03}, {0.03, 0.03}, {0.03, 0}});
  try {
    place_marbles(tiny, 1, 0.02, 1, 2);
    FAIL("tiny polygon accepted a marble");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PolygonTooSmall);
  }
}

TEST_CASE("placement PRNG reproduces fixed values") {
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  PlacementRng a(1, 2), b(1, 2);
  for (int i = 0; i < 10; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("greedy matching examples") {
  const std::vector<Point> same{{0, 0}, {1, 0}, {2, 2}};
  const auto id = assign_targets(same, same);
  REQUIRE(id.pairs.size() == 3);
  for (auto [i, j] : id.pairs) CHECK(i == j);
  CHECK(id.total_distance == 0.0);

  const std::vector<Point> old_pts{{0, 0}, {1, 0}}, new_pts{{0.9, 0}, {5, 5}};
  const auto m = assign_targets(old_pts, new_pts);
  REQUIRE(m.pairs.size() == 2);
  CHECK(m.pairs[0] == std::pair<std::size_t, std::size_t>{1, 0});
  CHECK(m.pairs[1] == std::pair<std::size_t, std::size_t>{0, 1});

  const std::vector<Point> three{{0, 0}, {1, 0}, {2, 0}}, one{{2.1, 0}};
  const auto f = assign_targets(three, one);
  CHECK(f.pairs.size() == 1);
  CHECK(f.fade_out == std::vector<std::size_t>{0, 1});
  CHECK(f.fade_in.empty());
  const auto g = assign_targets(one, three);
  CHECK(g.fade_in == std::vector<std::size_t>{0, 1});
}

TEST_CASE("greedy matching against brute force") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 1.0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Point> a(1 + rng() % 7), b(1 + rng() % 7);
    for (auto& p : a) p = {u(rng), u(rng)};
    for (auto& p : b) p = {u(rng), u(rng)};
    const auto m = assign_targets(a, b);
    REQUIRE(m.pairs.size() == std::min(a.size(), b.size()));
    std::vector<bool> ua(a.size()), ub(b.size());
    double total = 0;
    for (auto [i, j] : m.pairs) {
      CHECK_FALSE(ua[i]);
      CHECK_FALSE(ub[j]);
      ua[i] = ub[j] = true;
      total += distance(a[i], b[j]);
    }
    CHECK(total == doctest::Approx(m.total_distance));
    CHECK(m.fade_out.size() + m.pairs.size() == a.size());
    CHECK(m.fade_in.size() + m.pairs.size() == b.size());
    const double opt = optimal_total(a, b);
    CHECK(total >= opt - 1e-12);
    if (opt > 0) worst = std::max(worst, total / opt);
  }
  MESSAGE("worst greedy/optimal ratio: " << worst);
}
