#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hidmap/kernels.hpp"
#include "hidmap/marbles.hpp"

namespace hidmap::marbles {

bool SimState::all_settled() const noexcept {
  return std::all_of(agents.begin(), agents.end(), [](const Agent& a) { return a.settled; });
}

SimState make_sim_state(std::span<const Point> starts, std::span<const Point> targets,
                        std::span<const std::uint32_t> ids, double radius) {
  SimState s;
  s.radius = radius;
  const std::size_t n = starts.size();
  s.agents.resize(n);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    Agent& a = s.agents[i];
    a.id = ids.empty() ? static_cast<std::uint32_t>(i) : ids[i];
    a.position = starts[i];
    a.target = targets[i];
    a.settled = a.position == a.target;
    a.best_distance = distance(a.position, a.target);
    kernels::distances_from(targets[i], targets, d);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && d[j] < 4.0 * radius) ++a.priority;
    }
  }
  return s;
}

namespace {

Point clamp_length(Point v, double max_len) {
  const double len = norm(v);
  return len > max_len ? (max_len / len) * v : v;
}

Point rotate(Point v, double degrees) {
  const double a = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(a), s = std::sin(a);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Negative angles turn clockwise (right) in y-up coordinates.
constexpr double kDetours[] = {0, -30, 30, -60, 60, -90, 90, -120, 120};

struct Mover {
  std::vector<Agent>& agents;
  std::vector<Point> positions;  // live positions, updated as agents move
  double contact;                // 2r
  std::vector<double> near;

  // Indices of agents the straight move from -> to would violate.
  void blockers(std::size_t self, Point from, Point to, std::vector<std::size_t>& out) {
    out.clear();
    const double reach = contact + distance(from, to);
    near.resize(positions.size());
    kernels::distances_from(from, positions, near);
    for (std::size_t j = 0; j < positions.size(); ++j) {
      if (j == self || near[j] >= reach) continue;
      const double swept = segment_distance({from, to}, positions[j]);
      const double allowed = std::min(contact, near[j]);
      if (swept < allowed) out.push_back(j);
    }
  }
};

// The point of a's straight path to its target nearest to p; the asker's own
// position when p lies on the path.
Point closest_on_path(const Agent& a, Point p) {
  const Point ab = a.target - a.position;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return a.position;
  const double t = std::clamp(dot(p - a.position, ab) / len2, 0.0, 1.0);
  const Point q = a.position + t * ab;
  return distance(q, p) > 1e-12 ? q : a.position;
}

// Marbles are interchangeable: two moving agents in each other's way swap
// targets (with the target's id and priority) when that shortens their
// combined remaining distance.
void trade_targets(std::vector<Agent>& agents, std::size_t i, const std::vector<std::size_t>& blockers) {
  for (std::size_t j : blockers) {
    Agent& a = agents[i];
    Agent& b = agents[j];
    if (b.settled) continue;
    const double now = distance(a.position, a.target) + distance(b.position, b.target);
    const double swapped = distance(a.position, b.target) + distance(b.position, a.target);
    if (swapped >= now - 1e-12) continue;
    std::swap(a.target, b.target);
    std::swap(a.id, b.id);
    std::swap(a.priority, b.priority);
    for (Agent* x : {&a, &b}) {
      x->best_distance = distance(x->position, x->target);
      x->stall_steps = 0;
    }
  }
}

// Asks `blockers` to step away from agent i. Moving agents only yield to a
// higher-ranked asker; settled ones yield unless they outrank it, or always
// when `insist` is set.
void bump(std::vector<Agent>& agents, std::size_t i, const std::vector<std::size_t>& blockers, bool insist) {
  const Agent& a = agents[i];
  for (std::size_t j : blockers) {
    Agent& b = agents[j];
    const bool outranked = b.priority < a.priority || (b.priority == a.priority && b.id > a.id);
    if (b.settled ? (insist || b.priority <= a.priority) : outranked) {
      b.settled = false;
      b.yield_steps = kYieldSteps;
      b.yield_from = closest_on_path(a, b.position);
      b.best_distance = distance(b.position, b.target);
    }
  }
}

}  // namespace

SimState step_simulation(const SimState& state, const SimConstants& k) {
  SimState out = state;
  ++out.step;
  auto& agents = out.agents;
  const std::size_t n = agents.size();
  const double r = state.radius;
  const double contact = 2.0 * r;
  const double margin = k.separation_margin * r;
  const double repel_range = contact + margin;

  std::vector<Point> start(n);
  for (std::size_t i = 0; i < n; ++i) start[i] = agents[i].position;

  // Velocities from the start-of-frame snapshot.
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    Agent& a = agents[i];
    if (a.settled) continue;
    Point desired;
    if (a.yield_steps > 0) {
      const Point away = a.position - a.yield_from;
      const double len = norm(away);
      if (len > 0) desired = (k.v_max / len) * away;
    } else {
      desired = clamp_length(k.k_attract * (a.target - a.position), k.v_max);
    }
    Point repulsion;
    kernels::distances_from(a.position, start, d);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || d[j] >= repel_range || d[j] <= 0.0) continue;
      // Pairs whose targets sit closer than the repulsion range are only
      // pushed apart down to that ideal spacing, so both can come to rest.
      const double range = std::min(repel_range, std::max(contact, distance(a.target, agents[j].target)));
      if (d[j] >= range) continue;
      const double push = k.v_max * std::min(2.0, (range - d[j]) / margin);
      repulsion = repulsion + (push / d[j]) * (a.position - start[j]);
    }
    a.velocity = clamp_length((1.0 - k.blend) * a.velocity + k.blend * (desired + repulsion), k.v_max);
  }

  // Moves, one agent at a time against live positions.
  Mover mover{agents, start, contact, {}};
  std::vector<std::size_t> blocked_by, primary_blockers;
  for (std::size_t i = 0; i < n; ++i) {
    Agent& a = agents[i];
    if (a.settled) continue;
    if (a.yield_steps > 0) --a.yield_steps;

    if (a.yield_steps == 0 && distance(a.position, a.target) < k.settle_distance) {
      mover.blockers(i, a.position, a.target, blocked_by);
      if (blocked_by.empty()) {
        a.position = a.target;
        a.velocity = {};
        a.settled = true;
        mover.positions[i] = a.position;
        continue;
      }
    }

    bool moved = false;
    primary_blockers.clear();
    const Point v = a.velocity;
    if (norm(v) > 0.0) {
      for (double angle : kDetours) {
        const Point heading = angle == 0 ? v : rotate(v, angle);
        const Point to = a.position + k.dt * heading;
        mover.blockers(i, a.position, to, blocked_by);
        if (angle == 0) primary_blockers = blocked_by;
        if (blocked_by.empty()) {
          a.position = to;
          a.velocity = heading;
          mover.positions[i] = to;
          moved = true;
          break;
        }
      }
    }
    if (!moved) a.velocity = {};

    const double dist = distance(a.position, a.target);
    if (dist < a.best_distance - 0.5 * k.settle_distance) {
      a.best_distance = dist;
      a.stall_steps = 0;
    } else {
      ++a.stall_steps;
    }

    if (!primary_blockers.empty()) trade_targets(agents, i, primary_blockers);
    if (!moved && a.yield_steps == 0) bump(agents, i, primary_blockers, false);
    if (a.stall_steps >= kStallSteps && dist > 0.0) {
      const Point probe = a.position + (std::min(contact, dist) / dist) * (a.target - a.position);
      mover.blockers(i, a.position, probe, blocked_by);
      trade_targets(agents, i, blocked_by);
      bump(agents, i, blocked_by, true);
      a.stall_steps = 0;
      a.best_distance = dist;
    }
  }
  return out;
}

SimOutcome run_simulation(SimState state, const SimConstants& k) {
  SimOutcome outcome;
  auto min_pair = [](const SimState& s) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<Point> pos(s.agents.size());
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = s.agents[i].position;
    std::vector<double> d(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
      kernels::distances_from(pos[i], pos, d);
      for (std::size_t j = i + 1; j < pos.size(); ++j) best = std::min(best, d[j]);
    }
    return best;
  };
  outcome.min_pair_distance = min_pair(state);
  while (!state.all_settled() && state.step < k.max_steps) {
    state = step_simulation(state, k);
    outcome.min_pair_distance = std::min(outcome.min_pair_distance, min_pair(state));
  }
  if (!state.all_settled()) {
    for (Agent& a : state.agents) {
      a.position = a.target;
      a.velocity = {};
      a.settled = true;
    }
    state.snapped = true;
    outcome.snapped = true;
  }
  outcome.steps = state.step;
  outcome.final_state = std::move(state);
  return outcome;
}

}  // namespace hidmap::marbles
