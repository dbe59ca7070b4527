#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hidmap/dataset.hpp"
#include "hidmap/encoding.hpp"
#include "hidmap/geometry.hpp"
#include "hidmap/marbles.hpp"

namespace hidmap {

struct LayoutConfig {
  double circumradius = 1.0;
  GeometryConfig geometry;
  int marble_total = marbles::kDefaultTotal;
  std::uint64_t seed = 0;
  bool with_marbles = true;
};

// Which root side each dimension owns. Every dimension keeps a side, hidden
// or drilled ones included; only the cut sequence skips them.
struct SideAssignment {
  struct Entry {
    DimIndex dimension = 0;
    std::size_t side = 0;
    CutDirection cut;
  };
  int sides = 0;
  std::vector<Entry> entries;  // in side order

  const Entry& of(DimIndex dim) const;
};

struct LayoutRequest {
  std::vector<DimIndex> side_order;  // permutation of all dimensions
  std::vector<DimIndex> hidden;
  CategoryPath drill;

  // Default request: file order, nothing hidden or drilled.
  static LayoutRequest identity(const Dataset& ds);
};

struct LayoutNode {
  std::uint64_t id = 0;
  std::optional<std::size_t> parent;  // index into LayoutTree::nodes
  int depth = -1;                     // position in the cut order; -1 for the root
  std::optional<DimIndex> dimension;
  ValueIndex value = 0;
  Count count = 0;
  double fraction = 0.0;  // count / drilled total
  ConvexPolygon polygon;
  Style style;
  std::vector<std::size_t> children;
  std::vector<Marble> marbles;
  // Cuts made by the parent that bound this slab, when they exist.
  std::optional<Segment> lower_cut;
  std::optional<Segment> upper_cut;
};

struct LayoutTree {
  std::vector<LayoutNode> nodes;  // pre-order; nodes[0] is the root
  std::vector<DimIndex> cut_order;
  CategoryPath drill;
  Count total = 0;
  SideAssignment sides;
  double circumradius = 1.0;
  double marble_radius = 0.0;

  const LayoutNode& root() const { return nodes.front(); }
  bool is_leaf(const LayoutNode& n) const noexcept {
    return !cut_order.empty() && n.depth == static_cast<int>(cut_order.size()) - 1;
  }
  std::vector<std::size_t> leaves() const;
  std::optional<std::size_t> find(std::uint64_t id) const;
  // Node indices from the root's first child down to `index`.
  std::vector<std::size_t> path_to(std::size_t index) const;
};

// Smallest odd k >= max(3, n_visible). Throws NoVisibleDimensions for 0.
int sides_for(std::size_t n_visible);

SideAssignment assign_sides(const ConvexPolygon& root, std::span<const DimIndex> side_order);

// Hashed (drill path, cut order, value path), masked to 53 bits so ids survive JSON.
std::uint64_t node_id(const CategoryPath& drill, std::span<const DimIndex> cut_order,
                      std::span<const ValueIndex> value_path);

// Throws EmptySelection when a non-empty drill path matches no rows,
// NoVisibleDimensions when nothing is left to cut, InvalidOrder for a bad request.
LayoutTree build_tree(const Dataset& ds, const LayoutRequest& request, const LayoutConfig& cfg = {});
// `order` lists the dimensions to cut; the rest keep their sides but get no cuts.
LayoutTree build_tree(const Dataset& ds, std::span<const DimIndex> order, const CategoryPath& drill,
                      const LayoutConfig& cfg = {});

struct HitResult {
  enum class Kind { Miss, Node, Edge };
  Kind kind = Kind::Miss;
  std::size_t node = 0;
  friend bool operator==(const HitResult&, const HitResult&) = default;
};

// Edges first: the deepest node with a bounding cut within tolerance, ties
// to the smaller value index and then pre-order. Otherwise the leaf holding p.
HitResult hit_test(const LayoutTree& tree, Point p, double edge_tolerance);
inline double default_edge_tolerance(const LayoutTree& tree) { return 0.01 * tree.circumradius; }

struct NodeSummary {
  std::vector<std::pair<std::string, std::string>> value_path;
  double percentage = 0.0;
};

NodeSummary node_summary(const LayoutTree& tree, const Dataset& ds, std::size_t index);

}  // namespace hidmap
