#include <doctest.h>

#include <random>

#include "hidmap/error.hpp"
#include "hidmap/session.hpp"
#include "support.hpp"

using namespace hidmap;

namespace {

std::shared_ptr<const Dataset> demo() {
  static const auto ds = std::make_shared<const Dataset>(load_csv(testing::demo_csv_path()));
  return ds;
}

LayoutConfig quick() {
  LayoutConfig c;
  c.with_marbles = false;
  return c;
}

nlohmann::json doc_json(const SessionState& s, const LayoutConfig& cfg = {}) {
  auto j = to_json(document(s, cfg));
  j.erase("revision");
  return j;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::IoError;
}

std::uint64_t child_id(const SessionState& s, std::size_t depth_hint = 0) {
  const auto tree = build_tree(*s.dataset, s.request(), quick());
  std::size_t at = tree.root().children.front();
  for (std::size_t i = 0; i < depth_hint && !tree.nodes[at].children.empty(); ++i) {
    at = tree.nodes[at].children.front();
  }
  return tree.nodes[at].id;
}

}  // namespace

TEST_CASE("initial state") {
  const auto s = SessionState::initial(demo(), 3);
  CHECK(s.side_order == std::vector<DimIndex>{0, 1, 2, 3, 4});
  CHECK(s.hidden.empty());
  CHECK(s.drill_stack.empty());
  CHECK(s.revision == 0);
  CHECK(s.seed == 3);
  CHECK(s.order() == s.side_order);
}

TEST_CASE("reorder moves one side and shifts the rest") {
  const auto s = SessionState::initial(demo());
  const auto r = reorder(s, 4, 1);
  CHECK(r.side_order == std::vector<DimIndex>{0, 4, 1, 2, 3});
  CHECK(r.revision == 1);
  CHECK(reorder(r, 1, 4).side_order == s.side_order);
  CHECK(code_of([&] { reorder(s, 5, 0); }) == ErrorCode::InvalidPosition);
  const auto h = set_hidden(s, 2, true);
  CHECK(code_of([&] { reorder(h, 2, 0); }) == ErrorCode::InvalidPosition);
}

TEST_CASE("hiding and showing") {
  const auto s = SessionState::initial(demo());
  auto h = set_hidden(set_hidden(s, 3, true), 1, true);
  CHECK(h.hidden == std::vector<DimIndex>{1, 3});
  CHECK(h.order() == std::vector<DimIndex>{0, 2, 4});
  CHECK(h.revision == 2);
  const auto shown = set_hidden(set_hidden(h, 1, false), 3, false);
  CHECK(shown.hidden.empty());
  CHECK(doc_json(shown, quick()) == doc_json(s, quick()));
  CHECK(set_hidden(s, 0, false).revision == 1);
  CHECK(code_of([&] { set_hidden(s, 9, true); }) == ErrorCode::InvalidDimension);

  auto last = s;
  for (DimIndex d = 0; d < 4; ++d) last = set_hidden(last, d, true);
  CHECK(code_of([&] { set_hidden(last, 4, true); }) == ErrorCode::LastVisibleDimension);
  CHECK(set_hidden(last, 3, true).hidden == last.hidden);
}

TEST_CASE("drilling and going back") {
  const auto s = SessionState::initial(demo(), 5);
  const auto tree = build_tree(*s.dataset, s.request(), quick());
  const auto& female = tree.nodes[tree.root().children.front()];
  const auto d = drill(s, tree, female.id);
  CHECK(d.drill_stack.size() == 1);
  CHECK(d.is_drilled(0));
  CHECK(d.order() == std::vector<DimIndex>{1, 2, 3, 4});
  const auto doc = document(d, quick());
  CHECK(doc.tree.total == female.count);
  CHECK(code_of([&] { set_hidden(d, 0, true); }) == ErrorCode::InvalidDimension);
  CHECK(code_of([&] { reorder(d, 0, 1); }) == ErrorCode::InvalidPosition);

  const auto d2 = drill(d, child_id(d, 1));
  CHECK(d2.drill_stack.size() == 2);
  CHECK(d2.drill_stack.back().size() == 2);
  CHECK(d2.order() == std::vector<DimIndex>{3, 4});
  CHECK(doc_json(back(back(d2))) == doc_json(s));
  CHECK(back(d2).drill_stack == d.drill_stack);

  CHECK(code_of([&] { back(s); }) == ErrorCode::EmptyStack);
  CHECK(code_of([&] { drill(s, 424242); }) == ErrorCode::UnknownNode);
  CHECK(code_of([&] { drill(s, tree.root().id); }) == ErrorCode::UnknownNode);
  const auto leaf = tree.nodes[tree.leaves().front()].id;
  CHECK(code_of([&] { drill(s, leaf); }) == ErrorCode::LastVisibleDimension);
}

TEST_CASE("drilled documents carry a breadcrumb") {
  const auto s = SessionState::initial(demo());
  const auto d = drill(s, child_id(s));
  const auto j = to_json(document(d, quick()));
  REQUIRE(j["breadcrumb"].size() == 1);
  CHECK(j["breadcrumb"][0]["name"] == "gender");
  CHECK(j["breadcrumb"][0]["valueName"] == "female");
  CHECK(j["rowCount"] == 480);
  CHECK(j["total"].get<Count>() < 480);
  for (const auto& entry : j["legend"]) {
    if (entry["name"] == "gender") {
      CHECK(entry["drilled"] == true);
      CHECK(entry["visible"] == false);
      CHECK(entry["strokeWidth"].is_null());
    }
  }
}

TEST_CASE("documents are deterministic and follow the seed") {
  auto s = SessionState::initial(demo(), 11);
  CHECK(to_json(document(s)).dump() == to_json(document(s)).dump());
  auto t = s;
  t.seed = 12;
  CHECK(to_json(document(s)).dump() != to_json(document(t)).dump());
  LayoutConfig other;
  other.seed = 99;
  CHECK(to_json(document(s, other)).dump() == to_json(document(s)).dump());
}

TEST_CASE("transition plans account for every marble") {
  const auto s = SessionState::initial(demo(), 2);
  const auto a = document(s);
  const auto b = document(drill(s, child_id(s)));
  const auto plan = transition(a, b);
  const auto na = all_marbles(a.tree).size(), nb = all_marbles(b.tree).size();
  CHECK(plan.matches.size() + plan.fade_out.size() == na);
  CHECK(plan.matches.size() + plan.fade_in.size() == nb);
  CHECK(plan.from_revision == a.revision);
  CHECK(plan.to_revision == b.revision);
  const auto sim = simulation_for(plan, a, b);
  CHECK(sim.agents.size() == plan.matches.size());
  const auto j = to_json(plan);
  CHECK(j["matches"].size() == plan.matches.size());
  CHECK(j["constants"]["fadeMillis"] == 500);

  const auto same = transition(a, a);
  CHECK(same.matches.size() == na);
  CHECK(same.fade_in.empty());
  for (auto [x, y] : same.matches) CHECK(x == y);
}

TEST_CASE("node summaries") {
  const auto s = SessionState::initial(demo());
  const auto doc = document(s, quick());
  const auto leaf = doc.tree.nodes[doc.tree.leaves().front()];
  const auto j = summary_json(doc, leaf.id);
  CHECK(j["nodeId"] == leaf.id);
  CHECK(j["valuePath"].size() == 5);
  CHECK(j["count"] == leaf.count);
  CHECK(j["percentage"].get<double>() == doctest::Approx(100.0 * leaf.count / 480));
  CHECK(code_of([&] { summary_json(doc, 7); }) == ErrorCode::UnknownNode);
}

TEST_CASE("random command sequences keep the state valid") {
  std::mt19937_64 rng(31);
  const auto ds = demo();
  for (int seq = 0; seq < 200; ++seq) {
    auto s = SessionState::initial(ds, seq);
    for (int step = 0; step < 12; ++step) {
      const auto before = s;
      try {
        switch (rng() % 4) {
          case 0: s = reorder(s, rng() % 6, rng() % 6); break;
          case 1: s = set_hidden(s, rng() % 6, rng() % 2); break;
          case 2: {
            const auto tree = build_tree(*s.dataset, s.request(), quick());
            s = drill(s, tree, tree.nodes[rng() % tree.nodes.size()].id);
            CHECK(doc_json(back(s), quick()) == doc_json(before, quick()));
            break;
          }
          default: s = back(s); break;
        }
        CHECK(s.revision == before.revision + 1);
      } catch (const Error&) {
        CHECK(s.revision == before.revision);
      }
      CHECK_NOTHROW(s.validate());
    }
  }
}
