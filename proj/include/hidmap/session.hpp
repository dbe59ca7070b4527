#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <json.hpp>

#include "hidmap/dataset.hpp"
#include "hidmap/layout.hpp"
#include "hidmap/marbles.hpp"

namespace hidmap {

// The mutable interaction state. Every dimension owns one root side
// (`side_order`); the visible cut order is what remains after removing
// hidden and drilled dimensions.
struct SessionState {
  std::shared_ptr<const Dataset> dataset;
  std::vector<DimIndex> side_order;
  std::vector<DimIndex> hidden;  // ascending
  std::vector<CategoryPath> drill_stack;
  std::uint64_t seed = 0;
  std::uint64_t revision = 0;

  static SessionState initial(std::shared_ptr<const Dataset> ds, std::uint64_t seed = 0);

  CategoryPath drill_path() const;
  std::vector<DimIndex> order() const;
  bool is_hidden(DimIndex d) const noexcept;
  bool is_drilled(DimIndex d) const;
  LayoutRequest request() const;
  // Throws InvalidOrder when order, hidden and drilled do not partition the
  // dimensions or nothing is visible.
  void validate() const;
};

// Moves the dimension at side position `from` to `to`, shifting the ones between.
SessionState reorder(const SessionState& s, std::size_t from, std::size_t to);
SessionState set_hidden(const SessionState& s, DimIndex dim, bool hidden);
// `tree` must be the layout of `s`.
SessionState drill(const SessionState& s, const LayoutTree& tree, std::uint64_t node_id);
SessionState drill(const SessionState& s, std::uint64_t node_id, const LayoutConfig& cfg = {});
SessionState back(const SessionState& s);

struct LayoutDocument {
  std::uint64_t revision = 0;
  std::uint64_t seed = 0;
  std::shared_ptr<const Dataset> dataset;
  std::vector<DimIndex> side_order;
  std::vector<DimIndex> hidden;
  LayoutTree tree;
};

LayoutDocument document(const SessionState& s, const LayoutConfig& cfg = {});
nlohmann::json to_json(const LayoutDocument& doc);

struct TransitionPlan {
  std::uint64_t from_revision = 0;
  std::uint64_t to_revision = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> matches;  // marble ids (old, new)
  std::vector<std::uint32_t> fade_in;
  std::vector<std::uint32_t> fade_out;
  marbles::SimConstants constants;
  double radius = 0.0;
};

TransitionPlan transition(const LayoutDocument& before, const LayoutDocument& after,
                          const marbles::SimConstants& k = {});
nlohmann::json to_json(const TransitionPlan& plan);
// Stepper start state for the matched marbles of a plan.
marbles::SimState simulation_for(const TransitionPlan& plan, const LayoutDocument& before,
                                 const LayoutDocument& after);

nlohmann::json summary_json(const LayoutDocument& doc, std::uint64_t node_id);

// Collects every marble of the tree in pre-order.
std::vector<Marble> all_marbles(const LayoutTree& tree);

}  // namespace hidmap
