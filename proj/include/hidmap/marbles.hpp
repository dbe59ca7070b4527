#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "hidmap/dataset.hpp"
#include "hidmap/geometry.hpp"

namespace hidmap {

struct Marble {
  std::uint32_t id = 0;
  Point position;
  double radius = 0.0;
  std::uint32_t group = 0;
};

// Placement stream: std::mt19937_64 seeded with splitmix64(seed ^ splitmix64(node id)),
// doubles taken from the top 53 bits. Both halves are fixed by their
// published definitions, so placements reproduce bit for bit.
class PlacementRng {
 public:
  PlacementRng(std::uint64_t seed, std::uint64_t stream);
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

namespace marbles {

inline constexpr int kDefaultTotal = 100;
inline constexpr std::size_t kGroupSize = 5;
inline constexpr double kRadiusFraction = 0.02;  // of the circumradius
inline constexpr double kClusterSpacing = 2.2;   // in radii, centre to neighbour
inline constexpr int kAttemptsPerStage = 200;

// round-half-up(total * fraction)
int marble_count(double fraction, int total = kDefaultTotal) noexcept;
// Exact rational form used by the layout: round-half-up(total * count / whole).
int marble_count(Count count, Count whole, int total = kDefaultTotal) noexcept;

// Group sizes for `count` marbles: fives, then the remainder.
std::vector<std::size_t> group_sizes(std::size_t count);

// Random placement in quincunx groups of up to five. Throws PolygonTooSmall
// when not even one marble fits. Ids run 0..count-1.
std::vector<Marble> place_marbles(const ConvexPolygon& poly, std::size_t count, double radius,
                                  std::uint64_t seed, std::uint64_t node_id);

struct Matching {
  // (old index, new index) in acceptance order.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> fade_out;  // unmatched old indices, ascending
  std::vector<std::size_t> fade_in;   // unmatched new indices, ascending
  double total_distance = 0.0;
};

// Global greedy: all pairs by ascending distance (ties by old, then new index),
// accepted while both ends are free.
Matching assign_targets(std::span<const Point> old_points, std::span<const Point> new_points);

struct SimConstants {
  double k_attract = 4.0;           // 1/s
  double v_max = 0.5;               // R/s
  double blend = 0.35;
  double separation_margin = 0.1;   // multiple of the radius
  double settle_distance = 0.002;   // R
  double dt = 1.0 / 60.0;           // s
  int max_steps = 600;
};

struct Agent {
  std::uint32_t id = 0;
  Point position;
  Point velocity;
  Point target;
  bool settled = false;
  // Targets with more close neighbours are harder to reach once those
  // neighbours arrive, so they win right of way.
  int priority = 0;
  int yield_steps = 0;  // > 0 while stepping aside for another agent
  Point yield_from;
  double best_distance = 0.0;  // closest approach to the target so far
  int stall_steps = 0;         // frames since best_distance last improved
};

struct SimState {
  std::vector<Agent> agents;
  double radius = 0.0;
  int step = 0;
  bool snapped = false;

  bool all_settled() const noexcept;
};

inline constexpr int kYieldSteps = 20;
inline constexpr int kStallSteps = 30;

// Agents start at rest; priority counts other targets closer than 4 radii.
SimState make_sim_state(std::span<const Point> starts, std::span<const Point> targets,
                        std::span<const std::uint32_t> ids, double radius);

// One frame. Velocity blends toward the clamped attraction plus pair
// repulsion, which only acts down to the spacing of the two targets; a move
// is only taken if it keeps every pair at least 2r apart along the whole step
// (or no closer than it already was); blocked agents try rotated headings,
// turning right first, before holding still. Two moving agents in each
// other's way swap targets when that shortens their combined distance. A
// fully blocked agent asks settled blockers, and moving blockers of lower
// priority, to step off its path for kYieldSteps frames. An agent that has
// not gained ground for kStallSteps frames asks whoever stands on its direct
// path the same way, settled agents of any priority included.
SimState step_simulation(const SimState& state, const SimConstants& k);

struct SimOutcome {
  SimState final_state;
  int steps = 0;
  bool snapped = false;  // hit max_steps and snapped to targets
  double min_pair_distance = 0.0;  // over every frame, including the start
};

SimOutcome run_simulation(SimState state, const SimConstants& k);

}  // namespace marbles
}  // namespace hidmap
