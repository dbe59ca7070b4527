#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "hidmap/error.hpp"
#include "hidmap/layout.hpp"
#include "support.hpp"

using namespace hidmap;

namespace {

std::vector<std::pair<std::string, std::string>> value_path_of(const LayoutTree& t, const Dataset& ds,
                                                               std::size_t index) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i : t.path_to(index)) {
    const auto& d = ds.dimension(*t.nodes[i].dimension);
    out.emplace_back(d.name, d.values[t.nodes[i].value]);
  }
  return out;
}

std::vector<DimIndex> all_dims(const Dataset& ds) {
  std::vector<DimIndex> v(ds.dimension_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

LayoutConfig plain() {
  LayoutConfig c;
  c.with_marbles = false;
  return c;
}

LayoutConfig seeded(std::uint64_t seed) {
  LayoutConfig c;
  c.seed = seed;
  return c;
}

Point random_in_box(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  return {u(rng), u(rng)};
}

}  // namespace

TEST_CASE("side count is the smallest odd number that fits") {
  CHECK(sides_for(1) == 3);
  CHECK(sides_for(2) == 3);
  CHECK(sides_for(3) == 3);
  CHECK(sides_for(4) == 5);
  CHECK(sides_for(5) == 5);
  CHECK(sides_for(6) == 7);
  CHECK(sides_for(8) == 9);
  CHECK_THROWS_AS(sides_for(0), Error);
}

TEST_CASE("sides follow the side order") {
  const auto poly = regular_polygon(5);
  const std::vector<DimIndex> order{3, 0, 2, 1};
  const auto sa = assign_sides(poly, order);
  CHECK(sa.sides == 5);
  REQUIRE(sa.entries.size() == 4);
  for (std::size_t i = 0; i < order.size(); ++i) {
    CHECK(sa.entries[i].dimension == order[i]);
    CHECK(sa.entries[i].side == i);
    CHECK(sa.of(order[i]).side == i);
    const auto expect = side_cut(poly, i);
    CHECK(sa.entries[i].cut.inward_normal.x == doctest::Approx(expect.inward_normal.x));
    CHECK(sa.entries[i].cut.inward_normal.y == doctest::Approx(expect.inward_normal.y));
  }
}

TEST_CASE("one dimension splits the triangle by counts") {
  const Dataset ds = parse_csv("c\na\na\nb\nc\nc\nc\n");
  const auto t = build_tree(ds, LayoutRequest::identity(ds));
  CHECK(t.sides.sides == 3);
  REQUIRE(t.root().children.size() == 3);
  const double root_area = area(t.root().polygon);
  const double expect[] = {2.0 / 6, 1.0 / 6, 3.0 / 6};
  for (std::size_t v = 0; v < 3; ++v) {
    const auto& n = t.nodes[t.root().children[v]];
    CHECK(n.value == v);
    CHECK(t.is_leaf(n));
    CHECK(area(n.polygon) / root_area == doctest::Approx(expect[v]).epsilon(1e-9));
    CHECK(n.fraction == doctest::Approx(expect[v]));
  }
  CHECK(t.root().fraction == 1.0);
}

TEST_CASE("leaf counts match a row scan") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const auto raw = testing::random_table(rng, 1 + rng() % 4, 2, 4, 50 + rng() % 400);
    const Dataset ds = parse_csv(raw.csv());
    const auto t = build_tree(ds, LayoutRequest::identity(ds));
    Count sum = 0;
    for (std::size_t i : t.leaves()) {
      CHECK(t.nodes[i].count == raw.scan(value_path_of(t, ds, i)));
      sum += t.nodes[i].count;
    }
    CHECK(sum == raw.rows.size());
    CHECK(t.leaves().size() == raw.tally().size());
  }
}

TEST_CASE("areas are proportional to counts at every node") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const auto raw = testing::random_table(rng, 1 + rng() % 5, 2, 4, 10 + rng() % 2000);
    const Dataset ds = parse_csv(raw.csv());
    const auto t = build_tree(ds, LayoutRequest::identity(ds), plain());
    const double root_area = area(t.root().polygon);
    for (const auto& n : t.nodes) {
      CHECK(std::abs(area(n.polygon) / root_area - static_cast<double>(n.count) / t.total) <= 1e-6);
      if (!n.children.empty()) {
        Count c = 0;
        for (std::size_t k : n.children) c += t.nodes[k].count;
        CHECK(c == n.count);
      }
    }
  }
}

TEST_CASE("node counts stay within the cross product") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto raw = testing::random_table(rng, 1 + rng() % 5, 2, 4, 1 + rng() % 300);
    const Dataset ds = parse_csv(raw.csv());
    const auto t = build_tree(ds, LayoutRequest::identity(ds), plain());
    std::size_t product = 1, bound = 1;
    for (const auto& d : ds.dimensions()) {
      product *= d.value_count();
      bound += product;
    }
    CHECK(t.leaves().size() <= product);
    CHECK(t.leaves().size() <= ds.cells().size());
    CHECK(t.nodes.size() <= bound);
    std::set<std::uint64_t> ids;
    for (const auto& n : t.nodes) ids.insert(n.id);
    CHECK(ids.size() == t.nodes.size());
  }
}

TEST_CASE("changing the order keeps leaf counts and areas") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 8; ++trial) {
    const auto raw = testing::random_table(rng, 2 + rng() % 3, 2, 4, 100 + rng() % 500);
    const Dataset ds = parse_csv(raw.csv());
    auto order = all_dims(ds);
    auto summary = [&](const std::vector<DimIndex>& o) {
      const auto t = build_tree(ds, o, {}, plain());
      std::map<std::vector<std::string>, std::pair<Count, double>> m;
      for (std::size_t i : t.leaves()) {
        std::vector<std::string> key(ds.dimension_count());
        for (const auto& [name, value] : value_path_of(t, ds, i)) key[ds.dimension_index(name)] = value;
        m[key] = {t.nodes[i].count, area(t.nodes[i].polygon)};
      }
      return m;
    };
    const auto base = summary(order);
    for (int p = 0; p < 4; ++p) {
      std::shuffle(order.begin(), order.end(), rng);
      const auto other = summary(order);
      REQUIRE(other.size() == base.size());
      for (const auto& [key, v] : base) {
        REQUIRE(other.count(key) == 1);
        CHECK(other.at(key).first == v.first);
        CHECK(std::abs(other.at(key).second - v.second) <= 1e-8);
      }
    }
  }
}

TEST_CASE("leaves tile the root without overlap") {
  std::mt19937_64 rng(25);
  const auto raw = testing::random_table(rng, 3, 2, 3, 400);
  const Dataset ds = parse_csv(raw.csv());
  const auto t = build_tree(ds, LayoutRequest::identity(ds), plain());
  const auto leaves = t.leaves();
  int inside = 0;
  for (int i = 0; i < 10000; ++i) {
    const Point p = random_in_box(rng, 1.0);
    int holders = 0, loose = 0;
    for (std::size_t l : leaves) {
      holders += contains_point(t.nodes[l].polygon, p, -1e-9);
      loose += contains_point(t.nodes[l].polygon, p, 1e-9);
    }
    if (contains_point(t.root().polygon, p, -1e-9)) {
      ++inside;
      // Strictly inside at most one leaf, and within 1e-9 of at least one.
      CHECK(holders <= 1);
      CHECK(loose >= 1);
    } else {
      CHECK(holders == 0);
    }
  }
  CHECK(inside > 1000);
}

TEST_CASE("hit testing against an exhaustive oracle") {
  std::mt19937_64 rng(26);
  const auto raw = testing::random_table(rng, 3, 2, 3, 300);
  const Dataset ds = parse_csv(raw.csv());
  const auto t = build_tree(ds, LayoutRequest::identity(ds), plain());
  const double tol = default_edge_tolerance(t);

  auto oracle = [&](Point p) -> HitResult {
    std::vector<std::size_t> near;
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      const auto& n = t.nodes[i];
      if ((n.lower_cut && segment_distance(*n.lower_cut, p) <= tol) ||
          (n.upper_cut && segment_distance(*n.upper_cut, p) <= tol)) {
        near.push_back(i);
      }
    }
    if (!near.empty()) {
      std::stable_sort(near.begin(), near.end(), [&](std::size_t a, std::size_t b) {
        if (t.nodes[a].depth != t.nodes[b].depth) return t.nodes[a].depth > t.nodes[b].depth;
        return t.nodes[a].value < t.nodes[b].value;
      });
      return {HitResult::Kind::Edge, near.front()};
    }
    for (std::size_t l : t.leaves()) {
      if (contains_point(t.nodes[l].polygon, p)) return {HitResult::Kind::Node, l};
    }
    return {};
  };

  int edges = 0, nodes = 0, misses = 0;
  for (int i = 0; i < 3000; ++i) {
    const Point p = random_in_box(rng, 1.05);
    const auto got = hit_test(t, p, tol);
    const auto want = oracle(p);
    CHECK(got.kind == want.kind);
    if (got.kind != HitResult::Kind::Miss) CHECK(got.node == want.node);
    edges += got.kind == HitResult::Kind::Edge;
    nodes += got.kind == HitResult::Kind::Node;
    misses += got.kind == HitResult::Kind::Miss;
  }
  CHECK(edges > 0);
  CHECK(nodes > 0);
  CHECK(misses > 0);

  for (std::size_t l : t.leaves()) {
    const Point c = centroid(t.nodes[l].polygon);
    if (nearest_edge_distance(t.nodes[l].polygon, c) <= tol) continue;
    CHECK(hit_test(t, c, tol) == HitResult{HitResult::Kind::Node, l});
  }
  CHECK(hit_test(t, {5, 5}, tol).kind == HitResult::Kind::Miss);
}

TEST_CASE("a point on a cut selects the lower value") {
  const Dataset ds = parse_csv("c\na\nb\nb\n");
  const auto t = build_tree(ds, LayoutRequest::identity(ds), plain());
  const auto& first = t.nodes[t.root().children[0]];
  REQUIRE(first.upper_cut);
  const Point mid = 0.5 * (first.upper_cut->a + first.upper_cut->b);
  const auto hit = hit_test(t, mid, default_edge_tolerance(t));
  CHECK(hit.kind == HitResult::Kind::Edge);
  CHECK(hit.node == t.root().children[0]);
  CHECK_FALSE(first.lower_cut);
  CHECK_FALSE(t.nodes[t.root().children[1]].upper_cut);
}

TEST_CASE("summaries report value paths and drilled percentages") {
  const Dataset ds = load_csv(testing::demo_csv_path());
  const auto raw_text = testing::read_file(testing::demo_csv_path());
  const auto t = build_tree(ds, LayoutRequest::identity(ds), plain());
  const auto leaf = t.leaves().front();
  const auto s = node_summary(t, ds, leaf);
  CHECK(s.value_path.size() == ds.dimension_count());
  CHECK(s.percentage == doctest::Approx(100.0 * t.nodes[leaf].count / ds.row_count()));
  CHECK(node_summary(t, ds, 0).percentage == 100.0);
  CHECK_THROWS_AS(node_summary(t, ds, t.nodes.size()), Error);

  LayoutRequest req = LayoutRequest::identity(ds);
  req.drill = parse_path(ds, std::vector<std::string>{"gender=male"});
  const auto d = build_tree(ds, req, plain());
  CHECK(d.total == filter_count(ds, req.drill));
  double sum = 0;
  for (std::size_t i : d.leaves()) sum += node_summary(d, ds, i).percentage;
  CHECK(sum == doctest::Approx(100.0));
  for (std::size_t i : d.root().children) CHECK(node_summary(d, ds, i).value_path.front().first == "age");
}

TEST_CASE("marble totals round to about the configured total") {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 15; ++trial) {
    const auto raw = testing::random_table(rng, 1 + rng() % 3, 2, 3, 200 + rng() % 800);
    const Dataset ds = parse_csv(raw.csv());
    const auto t = build_tree(ds, LayoutRequest::identity(ds), seeded(static_cast<std::uint64_t>(trial)));
    std::size_t marbles_total = 0;
    const auto leaves = t.leaves();
    for (std::size_t l : leaves) {
      const auto& n = t.nodes[l];
      const int expect = marbles::marble_count(n.count, t.total);
      CHECK((n.marbles.size() == static_cast<std::size_t>(expect) || n.marbles.empty()));
      marbles_total += n.marbles.size();
      for (const auto& m : n.marbles) CHECK(contains_point(n.polygon, m.position));
    }
    const double half = leaves.size() / 2.0;
    CHECK(marbles_total <= 100 + half);
  }
}

TEST_CASE("bad requests are rejected") {
  const Dataset ds = parse_csv("a,b\nx,y\nx,z\n");
  LayoutRequest req = LayoutRequest::identity(ds);
  req.side_order = {0, 0};
  CHECK_THROWS_AS(build_tree(ds, req), Error);
  req = LayoutRequest::identity(ds);
  req.hidden = {0, 1};
  try {
    build_tree(ds, req);
    FAIL("everything hidden was accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoVisibleDimensions);
  }
  req = LayoutRequest::identity(ds);
  req.drill = CategoryPath({{0, 0}});
  CHECK_NOTHROW(build_tree(ds, req));
  std::vector<DimIndex> bad{0, 0};
  CHECK_THROWS_AS(build_tree(ds, bad, {}), Error);
}

TEST_CASE("empty drill selections are reported") {
  const Dataset ds = parse_csv("a,b,c\nx,y,p\nw,z,p\n");
  LayoutRequest req = LayoutRequest::identity(ds);
  req.drill = CategoryPath({{0, 0}, {1, 0}});  // a=w, b=y never occurs
  try {
    build_tree(ds, req);
    FAIL("empty selection accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptySelection);
  }
}
