#include "hidmap/session.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace hidmap {

SessionState SessionState::initial(std::shared_ptr<const Dataset> ds, std::uint64_t seed) {
  SessionState s;
  for (DimIndex d = 0; d < ds->dimension_count(); ++d) s.side_order.push_back(d);
  s.dataset = std::move(ds);
  s.seed = seed;
  s.validate();
  return s;
}

CategoryPath SessionState::drill_path() const {
  CategoryPath path;
  for (const auto& step : drill_stack) path = path.concat(step);
  return path;
}

bool SessionState::is_hidden(DimIndex d) const noexcept {
  return std::binary_search(hidden.begin(), hidden.end(), d);
}

bool SessionState::is_drilled(DimIndex d) const {
  return std::any_of(drill_stack.begin(), drill_stack.end(),
                     [d](const CategoryPath& p) { return p.fixes(d); });
}

std::vector<DimIndex> SessionState::order() const {
  std::vector<DimIndex> out;
  for (DimIndex d : side_order) {
    if (!is_hidden(d) && !is_drilled(d)) out.push_back(d);
  }
  return out;
}

LayoutRequest SessionState::request() const {
  return {side_order, hidden, drill_path()};
}

void SessionState::validate() const {
  if (!dataset) throw Error(ErrorCode::InvalidOrder, "session has no dataset");
  const std::size_t n = dataset->dimension_count();
  std::vector<bool> seen(n, false);
  if (side_order.size() != n) throw Error(ErrorCode::InvalidOrder, "side order must cover every dimension");
  for (DimIndex d : side_order) {
    if (d >= n || seen[d]) throw Error(ErrorCode::InvalidOrder, "side order is not a permutation");
    seen[d] = true;
  }
  if (!std::is_sorted(hidden.begin(), hidden.end()) ||
      std::adjacent_find(hidden.begin(), hidden.end()) != hidden.end()) {
    throw Error(ErrorCode::InvalidOrder, "hidden set must be sorted and unique");
  }
  for (DimIndex d : hidden) {
    if (d >= n) throw Error(ErrorCode::InvalidOrder, "hidden dimension out of range");
    if (is_drilled(d)) throw Error(ErrorCode::InvalidOrder, "a dimension is both hidden and drilled");
  }
  const CategoryPath path = drill_path();  // throws on a repeated dimension
  dataset->validate(path);
  if (order().empty()) throw Error(ErrorCode::InvalidOrder, "no dimension is visible");
}

SessionState reorder(const SessionState& s, std::size_t from, std::size_t to) {
  const std::size_t n = s.side_order.size();
  if (from >= n || to >= n) throw Error(ErrorCode::InvalidPosition, "side position out of range");
  for (std::size_t pos : {from, to}) {
    const DimIndex d = s.side_order[pos];
    if (s.is_hidden(d) || s.is_drilled(d)) {
      throw Error(ErrorCode::InvalidPosition,
                  "side " + std::to_string(pos) + " does not hold a visible dimension");
    }
  }
  SessionState out = s;
  const DimIndex moved = out.side_order[from];
  out.side_order.erase(out.side_order.begin() + static_cast<std::ptrdiff_t>(from));
  out.side_order.insert(out.side_order.begin() + static_cast<std::ptrdiff_t>(to), moved);
  ++out.revision;
  return out;
}

SessionState set_hidden(const SessionState& s, DimIndex dim, bool hidden) {
  if (!s.dataset || dim >= s.dataset->dimension_count()) {
    throw Error(ErrorCode::InvalidDimension, "dimension index out of range");
  }
  if (s.is_drilled(dim)) {
    throw Error(ErrorCode::InvalidDimension, "dimension '" + s.dataset->dimension(dim).name + "' is drilled");
  }
  SessionState out = s;
  if (hidden && !s.is_hidden(dim)) {
    if (s.order().size() <= 1) {
      throw Error(ErrorCode::LastVisibleDimension, "cannot hide the last visible dimension");
    }
    out.hidden.insert(std::upper_bound(out.hidden.begin(), out.hidden.end(), dim), dim);
  } else if (!hidden && s.is_hidden(dim)) {
    out.hidden.erase(std::find(out.hidden.begin(), out.hidden.end(), dim));
  }
  ++out.revision;
  return out;
}

SessionState drill(const SessionState& s, const LayoutTree& tree, std::uint64_t node_id) {
  const auto index = tree.find(node_id);
  if (!index) throw Error(ErrorCode::UnknownNode, "no node with id " + std::to_string(node_id));
  if (*index == 0) throw Error(ErrorCode::UnknownNode, "the root fixes no dimension");
  CategoryPath step;
  for (std::size_t i : tree.path_to(*index)) {
    step.push(*tree.nodes[i].dimension, tree.nodes[i].value);
  }
  SessionState out = s;
  out.drill_stack.push_back(step);
  if (out.order().empty()) {
    throw Error(ErrorCode::LastVisibleDimension, "drilling here would leave no dimension to display");
  }
  if (filter_count(*s.dataset, out.drill_path()) == 0) {
    throw Error(ErrorCode::EmptySelection, "the selected subset has no rows");
  }
  ++out.revision;
  return out;
}

SessionState drill(const SessionState& s, std::uint64_t node_id, const LayoutConfig& cfg) {
  LayoutConfig quick = cfg;
  quick.with_marbles = false;
  return drill(s, build_tree(*s.dataset, s.request(), quick), node_id);
}

SessionState back(const SessionState& s) {
  if (s.drill_stack.empty()) throw Error(ErrorCode::EmptyStack, "nothing to go back to");
  SessionState out = s;
  out.drill_stack.pop_back();
  ++out.revision;
  return out;
}

LayoutDocument document(const SessionState& s, const LayoutConfig& cfg) {
  LayoutConfig c = cfg;
  c.seed = s.seed;
  return {s.revision, s.seed, s.dataset, s.side_order, s.hidden, build_tree(*s.dataset, s.request(), c)};
}

namespace {

double r6(double v) {
  const double r = std::round(v * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;
}

nlohmann::json point_json(Point p) { return nlohmann::json::array({p.x, p.y}); }

nlohmann::json segment_json(const std::optional<Segment>& s) {
  if (!s) return nullptr;
  return nlohmann::json::array({point_json(s->a), point_json(s->b)});
}

nlohmann::json style_json(const Style& s) {
  return {{"h", r6(s.hue)}, {"s", r6(s.saturation)}, {"l", r6(s.lightness)}, {"stroke", r6(s.stroke_width)}};
}

}  // namespace

std::vector<Marble> all_marbles(const LayoutTree& tree) {
  std::vector<Marble> out;
  for (const auto& node : tree.nodes) out.insert(out.end(), node.marbles.begin(), node.marbles.end());
  return out;
}

nlohmann::json to_json(const LayoutDocument& doc) {
  using nlohmann::json;
  const Dataset& ds = *doc.dataset;
  const LayoutTree& tree = doc.tree;
  const std::size_t n_cut = tree.cut_order.size();

  json legend = json::array();
  for (const auto& entry : tree.sides.entries) {
    const auto& dim = ds.dimension(entry.dimension);
    auto pos = std::find(tree.cut_order.begin(), tree.cut_order.end(), entry.dimension);
    const bool visible = pos != tree.cut_order.end();
    const bool hidden = std::binary_search(doc.hidden.begin(), doc.hidden.end(), entry.dimension);
    json item = {
        {"index", entry.dimension},
        {"name", dim.name},
        {"side", entry.side},
        {"visible", visible},
        {"hidden", hidden},
        {"drilled", tree.drill.fixes(entry.dimension)},
        {"cut",
         {{"direction", point_json(entry.cut.direction)},
          {"inwardNormal", point_json(entry.cut.inward_normal)},
          {"anchor", point_json(entry.cut.anchor)}}},
    };
    if (visible) {
      const auto i = static_cast<std::size_t>(pos - tree.cut_order.begin());
      item["position"] = i;
      item["hue"] = r6(encoding::hue_for_dimension(i, n_cut));
      item["strokeWidth"] = r6(encoding::stroke_width_for_depth(i, n_cut));
    } else {
      item["position"] = nullptr;
      item["hue"] = nullptr;
      item["strokeWidth"] = nullptr;
    }
    json values = json::array();
    for (std::size_t v = 0; v < dim.values.size(); ++v) {
      values.push_back({{"index", v},
                        {"name", dim.values[v]},
                        {"lightness", r6(encoding::lightness_for_value(v, dim.values.size()))}});
    }
    item["values"] = std::move(values);
    legend.push_back(std::move(item));
  }

  json breadcrumb = json::array();
  for (const auto& e : tree.drill.entries()) {
    const auto& dim = ds.dimension(e.dimension);
    breadcrumb.push_back({{"dimension", e.dimension},
                          {"name", dim.name},
                          {"value", e.value},
                          {"valueName", dim.values[e.value]}});
  }

  json nodes = json::array();
  for (const auto& node : tree.nodes) {
    json polygon = json::array();
    for (const Point& p : node.polygon.vertices()) polygon.push_back(point_json(p));
    json children = json::array();
    for (std::size_t c : node.children) children.push_back(tree.nodes[c].id);
    json marbles = json::array();
    for (const auto& m : node.marbles) {
      marbles.push_back({{"id", m.id}, {"x", m.position.x}, {"y", m.position.y}, {"r", m.radius},
                         {"group", m.group}});
    }
    json item = {
        {"id", node.id},
        {"parent", node.parent ? json(tree.nodes[*node.parent].id) : json(nullptr)},
        {"depth", node.depth},
        {"dimension", node.dimension ? json(*node.dimension) : json(nullptr)},
        {"value", node.dimension ? json(node.value) : json(nullptr)},
        {"leaf", tree.is_leaf(node)},
        {"count", node.count},
        {"fraction", node.fraction},
        {"polygon", std::move(polygon)},
        {"style", style_json(node.style)},
        {"children", std::move(children)},
        {"lowerCut", segment_json(node.lower_cut)},
        {"upperCut", segment_json(node.upper_cut)},
        {"marbles", std::move(marbles)},
    };
    nodes.push_back(std::move(item));
  }

  return {
      {"revision", doc.revision},
      {"seed", doc.seed},
      {"sides", tree.sides.sides},
      {"circumradius", tree.circumradius},
      {"rowCount", ds.row_count()},
      {"total", tree.total},
      {"edgeTolerance", default_edge_tolerance(tree)},
      {"marbleRadius", tree.marble_radius},
      {"marbleStyle",
       {{"h", encoding::kMarbleHue}, {"s", encoding::kMarbleSaturation}, {"l", encoding::kMarbleLightness}}},
      {"sideOrder", doc.side_order},
      {"order", tree.cut_order},
      {"hidden", doc.hidden},
      {"legend", std::move(legend)},
      {"breadcrumb", std::move(breadcrumb)},
      {"nodes", std::move(nodes)},
  };
}

TransitionPlan transition(const LayoutDocument& before, const LayoutDocument& after,
                          const marbles::SimConstants& k) {
  const auto old_marbles = all_marbles(before.tree);
  const auto new_marbles = all_marbles(after.tree);
  std::vector<Point> old_pts, new_pts;
  for (const auto& m : old_marbles) old_pts.push_back(m.position);
  for (const auto& m : new_marbles) new_pts.push_back(m.position);
  const auto matching = marbles::assign_targets(old_pts, new_pts);

  TransitionPlan plan;
  plan.from_revision = before.revision;
  plan.to_revision = after.revision;
  plan.constants = k;
  plan.radius = after.tree.marble_radius;
  for (auto [i, j] : matching.pairs) plan.matches.emplace_back(old_marbles[i].id, new_marbles[j].id);
  for (std::size_t i : matching.fade_out) plan.fade_out.push_back(old_marbles[i].id);
  for (std::size_t j : matching.fade_in) plan.fade_in.push_back(new_marbles[j].id);
  return plan;
}

nlohmann::json to_json(const TransitionPlan& plan) {
  using nlohmann::json;
  json matches = json::array();
  for (auto [a, b] : plan.matches) matches.push_back(json::array({a, b}));
  const auto& k = plan.constants;
  return {
      {"fromRevision", plan.from_revision},
      {"toRevision", plan.to_revision},
      {"matches", std::move(matches)},
      {"fadeIn", plan.fade_in},
      {"fadeOut", plan.fade_out},
      {"constants",
       {{"kAttract", k.k_attract},
        {"vMax", k.v_max},
        {"blend", k.blend},
        {"separationMargin", k.separation_margin},
        {"settleDistance", k.settle_distance},
        {"dt", k.dt},
        {"maxSteps", k.max_steps},
        {"yieldSteps", marbles::kYieldSteps},
        {"radius", plan.radius},
        {"fadeMillis", 500}}},
  };
}

marbles::SimState simulation_for(const TransitionPlan& plan, const LayoutDocument& before,
                                 const LayoutDocument& after) {
  std::unordered_map<std::uint32_t, Point> old_pos, new_pos;
  for (const auto& m : all_marbles(before.tree)) old_pos[m.id] = m.position;
  for (const auto& m : all_marbles(after.tree)) new_pos[m.id] = m.position;
  std::vector<Point> starts, targets;
  std::vector<std::uint32_t> ids;
  for (auto [a, b] : plan.matches) {
    starts.push_back(old_pos.at(a));
    targets.push_back(new_pos.at(b));
    ids.push_back(b);
  }
  return marbles::make_sim_state(starts, targets, ids, plan.radius);
}

nlohmann::json summary_json(const LayoutDocument& doc, std::uint64_t node_id) {
  const auto index = doc.tree.find(node_id);
  if (!index) throw Error(ErrorCode::UnknownNode, "no node with id " + std::to_string(node_id));
  const auto summary = node_summary(doc.tree, *doc.dataset, *index);
  nlohmann::json path = nlohmann::json::array();
  for (const auto& [dim, value] : summary.value_path) path.push_back({{"dimension", dim}, {"value", value}});
  return {{"revision", doc.revision},
          {"nodeId", node_id},
          {"valuePath", std::move(path)},
          {"percentage", summary.percentage},
          {"count", doc.tree.nodes[*index].count}};
}

}  // namespace hidmap
