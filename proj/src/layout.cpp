#include "hidmap/layout.hpp"

#include <algorithm>
#include <limits>

namespace hidmap {

const SideAssignment::Entry& SideAssignment::of(DimIndex dim) const {
  for (const auto& e : entries) {
    if (e.dimension == dim) return e;
  }
  throw Error(ErrorCode::InvalidDimension, "dimension " + std::to_string(dim) + " has no side");
}

LayoutRequest LayoutRequest::identity(const Dataset& ds) {
  LayoutRequest r;
  for (DimIndex d = 0; d < ds.dimension_count(); ++d) r.side_order.push_back(d);
  return r;
}

std::vector<std::size_t> LayoutTree::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (is_leaf(nodes[i])) out.push_back(i);
  }
  return out;
}

std::optional<std::size_t> LayoutTree::find(std::uint64_t id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> LayoutTree::path_to(std::size_t index) const {
  std::vector<std::size_t> path;
  for (std::optional<std::size_t> at = index; at && *at != 0; at = nodes[*at].parent) {
    path.push_back(*at);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

int sides_for(std::size_t n_visible) {
  if (n_visible == 0) throw Error(ErrorCode::NoVisibleDimensions, "no visible dimensions");
  std::size_t k = std::max<std::size_t>(3, n_visible);
  if (k % 2 == 0) ++k;
  return static_cast<int>(k);
}

SideAssignment assign_sides(const ConvexPolygon& root, std::span<const DimIndex> side_order) {
  SideAssignment out;
  out.sides = static_cast<int>(root.size());
  if (side_order.size() > root.size()) {
    throw Error(ErrorCode::InvalidOrder, "more dimensions than polygon sides");
  }
  for (std::size_t s = 0; s < side_order.size(); ++s) {
    out.entries.push_back({side_order[s], s, side_cut(root, s)});
  }
  return out;
}

std::uint64_t node_id(const CategoryPath& drill, std::span<const DimIndex> cut_order,
                      std::span<const ValueIndex> value_path) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xFF;
      h *= 1099511628211ull;
    }
  };
  mix(drill.size());
  for (const auto& e : drill.entries()) {
    mix(e.dimension);
    mix(e.value);
  }
  mix(cut_order.size());
  for (DimIndex d : cut_order) mix(d);
  mix(value_path.size());
  for (ValueIndex v : value_path) mix(v);
  return h & ((std::uint64_t{1} << 53) - 1);
}

namespace {

struct Builder {
  const Dataset& ds;
  const LayoutConfig& cfg;
  LayoutTree& tree;
  std::vector<ValueIndex> value_path;

  void split(std::size_t index, const std::vector<const Dataset::Cell*>& cells) {
    const int depth = tree.nodes[index].depth + 1;
    if (depth >= static_cast<int>(tree.cut_order.size())) return;
    const DimIndex dim = tree.cut_order[static_cast<std::size_t>(depth)];
    const std::size_t k = ds.dimension(dim).value_count();

    std::vector<std::vector<const Dataset::Cell*>> buckets(k);
    std::vector<Count> counts(k, 0);
    for (const auto* c : cells) {
      buckets[c->tuple[dim]].push_back(c);
      counts[c->tuple[dim]] += c->count;
    }
    const Count node_count = tree.nodes[index].count;
    std::vector<double> fractions(k);
    for (std::size_t v = 0; v < k; ++v) {
      fractions[v] = static_cast<double>(counts[v]) / static_cast<double>(node_count);
    }
    const CutDirection cut = tree.sides.of(dim).cut;
    // copy: the node vector grows below
    const ConvexPolygon parent_poly = tree.nodes[index].polygon;
    SplitResult parts = split_proportional(parent_poly, cut, fractions, cfg.geometry);

    std::size_t first = k, last = 0;
    for (std::size_t v = 0; v < k; ++v) {
      if (counts[v] > 0) {
        first = std::min(first, v);
        last = v;
      }
    }
    for (std::size_t v = 0; v < k; ++v) {
      if (counts[v] == 0) continue;
      if (!parts.slabs[v]) {
        throw Error(ErrorCode::DegenerateSlab, "slab for value '" + ds.dimension(dim).values[v] +
                                                   "' is below the degenerate area threshold");
      }
      value_path.push_back(static_cast<ValueIndex>(v));
      LayoutNode child{
          .id = node_id(tree.drill, tree.cut_order, value_path),
          .parent = index,
          .depth = depth,
          .dimension = dim,
          .value = static_cast<ValueIndex>(v),
          .count = counts[v],
          .fraction = static_cast<double>(counts[v]) / static_cast<double>(tree.total),
          .polygon = std::move(*parts.slabs[v]),
          .style = {},
          .children = {},
          .marbles = {},
          .lower_cut = v != first ? chord(parent_poly, cut, parts.bounds[v].lo) : std::nullopt,
          .upper_cut = v != last ? chord(parent_poly, cut, parts.bounds[v].hi) : std::nullopt,
      };
      const std::size_t child_index = tree.nodes.size();
      tree.nodes.push_back(std::move(child));
      tree.nodes[index].children.push_back(child_index);
      split(child_index, buckets[v]);
      value_path.pop_back();
    }
  }
};

void validate_request(const Dataset& ds, const LayoutRequest& req) {
  const std::size_t n = ds.dimension_count();
  std::vector<bool> seen(n, false);
  if (req.side_order.size() != n) {
    throw Error(ErrorCode::InvalidOrder, "side order must list every dimension once");
  }
  for (DimIndex d : req.side_order) {
    if (d >= n || seen[d]) throw Error(ErrorCode::InvalidOrder, "side order is not a permutation");
    seen[d] = true;
  }
  for (DimIndex d : req.hidden) {
    if (d >= n) throw Error(ErrorCode::InvalidOrder, "hidden dimension out of range");
  }
  ds.validate(req.drill);
}

void style_tree(LayoutTree& tree, const Dataset& ds) {
  const std::size_t n = tree.cut_order.size();
  double amin = std::numeric_limits<double>::infinity(), amax = 0.0;
  for (const auto& node : tree.nodes) {
    if (!tree.is_leaf(node)) continue;
    const double a = area(node.polygon);
    amin = std::min(amin, a);
    amax = std::max(amax, a);
  }
  for (auto& node : tree.nodes) {
    if (node.depth < 0) {
      node.style = {0.0, 0.0, 0.2, encoding::stroke_width_for_depth(0, std::max<std::size_t>(n, 1))};
      continue;
    }
    const auto pos = static_cast<std::size_t>(node.depth);
    const std::size_t k = ds.dimension(*node.dimension).value_count();
    if (tree.is_leaf(node)) {
      node.style = encoding::leaf_fill(pos, n, node.value, k, area(node.polygon), amin, amax);
    } else {
      node.style = {encoding::hue_for_dimension(pos, n), 1.0, encoding::lightness_for_value(node.value, k),
                    encoding::stroke_width_for_depth(pos, n)};
    }
  }
}

void place_tree_marbles(LayoutTree& tree, const LayoutConfig& cfg) {
  std::uint32_t next_id = 0;
  for (auto& node : tree.nodes) {
    if (!tree.is_leaf(node)) continue;
    const int count = marbles::marble_count(node.count, tree.total, cfg.marble_total);
    if (count <= 0) continue;
    try {
      node.marbles = marbles::place_marbles(node.polygon, static_cast<std::size_t>(count),
                                            tree.marble_radius, cfg.seed, node.id);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PolygonTooSmall) throw;
      continue;
    }
    for (auto& m : node.marbles) m.id = next_id++;
  }
}

}  // namespace

LayoutTree build_tree(const Dataset& ds, const LayoutRequest& request, const LayoutConfig& cfg) {
  validate_request(ds, request);
  LayoutTree tree;
  tree.drill = request.drill;
  tree.circumradius = cfg.circumradius;
  tree.marble_radius = marbles::kRadiusFraction * cfg.circumradius;
  for (DimIndex d : request.side_order) {
    const bool hidden = std::find(request.hidden.begin(), request.hidden.end(), d) != request.hidden.end();
    if (!hidden && !request.drill.fixes(d)) tree.cut_order.push_back(d);
  }
  if (tree.cut_order.empty()) {
    throw Error(ErrorCode::NoVisibleDimensions, "every dimension is hidden or drilled");
  }
  const ConvexPolygon root_poly = regular_polygon(sides_for(request.side_order.size()), cfg.circumradius);
  tree.sides = assign_sides(root_poly, request.side_order);
  tree.total = filter_count(ds, request.drill);
  if (tree.total == 0 && !request.drill.empty()) {
    throw Error(ErrorCode::EmptySelection, "drill path matches no rows");
  }

  tree.nodes.push_back(LayoutNode{
      .id = node_id(tree.drill, tree.cut_order, {}),
      .parent = std::nullopt,
      .depth = -1,
      .dimension = std::nullopt,
      .value = 0,
      .count = tree.total,
      .fraction = 1.0,
      .polygon = root_poly,
      .style = {},
      .children = {},
      .marbles = {},
      .lower_cut = std::nullopt,
      .upper_cut = std::nullopt,
  });
  if (tree.total > 0) {
    std::vector<const Dataset::Cell*> cells;
    for (const auto& c : ds.cells()) {
      if (matches(c, request.drill)) cells.push_back(&c);
    }
    Builder builder{ds, cfg, tree, {}};
    builder.split(0, cells);
  }
  style_tree(tree, ds);
  if (cfg.with_marbles) place_tree_marbles(tree, cfg);
  return tree;
}

LayoutTree build_tree(const Dataset& ds, std::span<const DimIndex> order, const CategoryPath& drill,
                      const LayoutConfig& cfg) {
  LayoutRequest req;
  req.drill = drill;
  std::vector<bool> listed(ds.dimension_count(), false);
  for (DimIndex d : order) {
    if (d >= ds.dimension_count() || listed[d]) {
      throw Error(ErrorCode::InvalidOrder, "order is not a list of distinct dimensions");
    }
    if (drill.fixes(d)) throw Error(ErrorCode::InvalidOrder, "order contains a drilled dimension");
    listed[d] = true;
    req.side_order.push_back(d);
  }
  for (DimIndex d = 0; d < ds.dimension_count(); ++d) {
    if (listed[d]) continue;
    req.side_order.push_back(d);
    if (!drill.fixes(d)) req.hidden.push_back(d);
  }
  return build_tree(ds, req, cfg);
}

HitResult hit_test(const LayoutTree& tree, Point p, double edge_tolerance) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& node = tree.nodes[i];
    bool near = false;
    for (const auto& cut : {node.lower_cut, node.upper_cut}) {
      if (cut && segment_distance(*cut, p) <= edge_tolerance) near = true;
    }
    if (!near) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto& cur = tree.nodes[*best];
    if (node.depth > cur.depth || (node.depth == cur.depth && node.value < cur.value)) best = i;
  }
  if (best) return {HitResult::Kind::Edge, *best};

  if (!contains_point(tree.root().polygon, p)) return {};
  std::size_t at = 0;
  while (!tree.nodes[at].children.empty()) {
    std::optional<std::size_t> next;
    for (std::size_t c : tree.nodes[at].children) {
      if (contains_point(tree.nodes[c].polygon, p, 1e-12)) {
        next = c;
        break;
      }
    }
    if (!next) return {};
    at = *next;
  }
  if (!tree.is_leaf(tree.nodes[at])) return {};
  return {HitResult::Kind::Node, at};
}

NodeSummary node_summary(const LayoutTree& tree, const Dataset& ds, std::size_t index) {
  if (index >= tree.nodes.size()) throw Error(ErrorCode::UnknownNode, "node index out of range");
  NodeSummary s;
  for (std::size_t i : tree.path_to(index)) {
    const auto& node = tree.nodes[i];
    const auto& dim = ds.dimension(*node.dimension);
    s.value_path.emplace_back(dim.name, dim.values[node.value]);
  }
  const auto& node = tree.nodes[index];
  s.percentage = index == 0 || tree.total == 0
                     ? 100.0
                     : 100.0 * static_cast<double>(node.count) / static_cast<double>(tree.total);
  return s;
}

}  // namespace hidmap
