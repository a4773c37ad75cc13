#include <gtest/gtest.h>

#include <random>

#include "occ/catalog.hpp"
#include "occ/dsl/compile.hpp"
#include "occ/event_model.hpp"

namespace {

occ::StaticModel model_of(std::string_view entry) {
  return occ::build_model(occ::catalog::load(entry).model).value();
}

occ::ArcRef flow(std::string a, std::string b) { return {occ::ArcKind::Flow, std::move(a), std::move(b)}; }
occ::ArcRef trig(std::string a, std::string b) { return {occ::ArcKind::Trigger, std::move(a), std::move(b)}; }

}  // namespace

TEST(DefineEvent, OrderPlacedRegion) {
  auto m = model_of("inventory");
  occ::EventSpec spec;
  spec.id = "E1";
  spec.label = "order placed";
  spec.arcs = {flow("Order.create", "Order.release"), flow("Order.release", "Order.transfer_out"),
               flow("Order.transfer_out", "Request.transfer_in"), flow("Request.transfer_in", "Request.receive"),
               flow("Request.receive", "Request.process")};
  auto e = occ::define_event(m, spec);
  ASSERT_TRUE(e.ok()) << e.first_error();
  EXPECT_EQ(e.value().region.actions.size(), 6u);
  EXPECT_EQ(e.value().status, occ::EventStatus::Subsisting);
  EXPECT_FALSE(e.value().time.has_value());
}

TEST(DefineEvent, EmptyRegion) {
  auto m = model_of("socrates");
  auto e = occ::define_event(m, {"E", "", {}, {}, nullptr, {}, false, {}});
  ASSERT_FALSE(e.ok());
  EXPECT_EQ(e.errors()[0].rule, "EmptyRegion");
}

TEST(DefineEvent, DisconnectedRegion) {
  auto m = model_of("socrates");
  auto e = occ::define_event(m, {"E", "", {"Socrates.create", "Walk.process"}, {}, nullptr, {}, false, {}});
  ASSERT_FALSE(e.ok());
  EXPECT_EQ(e.errors()[0].rule, "DisconnectedRegion");
  auto joined = occ::define_event(
      m, {"E", "", {}, {trig("Socrates.create", "Walk.create"), flow("Walk.create", "Walk.process")}, nullptr, {}, false, {}});
  EXPECT_TRUE(joined.ok());
}

TEST(DefineEvent, UnknownIdsAndVariables) {
  auto m = model_of("inventory");
  auto e = occ::define_event(m, {"E", "", {"Nope.create"}, {flow("Order.create", "Stock.process")}, nullptr, {}, false, {}});
  ASSERT_FALSE(e.ok());
  EXPECT_EQ(e.errors().size(), 2u);
  EXPECT_TRUE(occ::has_rule(e.errors(), "UnknownId"));

  auto guarded = occ::define_event(m, {"E", "", {"Order.create"}, {}, occ::dsl::parse_expression("Stock > 1").value(),
                                       {}, false, {}});
  ASSERT_FALSE(guarded.ok());
  EXPECT_EQ(guarded.errors()[0].rule, "UndeclaredVariable");

  auto effect = occ::define_event(
      m, {"E", "", {"Order.create"}, {}, nullptr, {{"Nope", occ::literal(std::int64_t{1})}}, false, {}});
  ASSERT_FALSE(effect.ok());
  EXPECT_EQ(effect.errors()[0].rule, "UndeclaredVariable");
}

// Region connectivity against a plain BFS over random subsets of a chain of
// actions with random extra arcs.
TEST(DefineEvent, ConnectivityMatchesGraphSearch) {
  std::mt19937 rng(3);
  for (int round = 0; round < 500; ++round) {
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<std::string> actions;
    for (int i = 0; i < n; ++i) actions.push_back("a" + std::to_string(i));
    std::vector<occ::ArcRef> arcs;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && std::uniform_int_distribution<int>(0, 5)(rng) == 0) arcs.push_back(flow(actions[i], actions[j]));

    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (const auto& a : arcs) {
        int f = a.from[1] - '0', t = a.to[1] - '0';
        int other = f == cur ? t : t == cur ? f : -1;
        if (other >= 0 && !seen[other]) {
          seen[other] = true;
          stack.push_back(other);
        }
      }
    }
    const bool expected = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    EXPECT_EQ(occ::regions_connected(actions, arcs), expected);
  }
}

TEST(DecomposeGeneric, Socrates) {
  auto events = occ::decompose_generic(model_of("socrates"));
  ASSERT_EQ(events.size(), 3u);
  EXPECT_EQ(events[0].region.actions, std::vector<std::string>{"Socrates.create"});
  EXPECT_EQ(events[1].region.actions, std::vector<std::string>{"Walk.create"});
  EXPECT_EQ(events[2].region.actions, std::vector<std::string>{"Walk.process"});
  for (const auto& e : events) EXPECT_TRUE(e.region.arcs.empty());
}

TEST(DecomposeGeneric, EmptyModel) { EXPECT_TRUE(occ::decompose_generic(occ::build_model({}).value()).empty()); }

TEST(DecomposeGeneric, InventoryCoversEveryActionOnce) {
  auto m = model_of("inventory");
  auto events = occ::decompose_generic(m);
  ASSERT_EQ(events.size(), m.actions().size());
  std::set<std::string> covered;
  for (const auto& e : events) {
    ASSERT_EQ(e.region.actions.size(), 1u);
    EXPECT_TRUE(covered.insert(e.region.actions[0]).second);
  }
  EXPECT_EQ(covered.size(), m.actions().size());

  // Flow order: every arc's source comes before its target unless they sit on a cycle.
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < events.size(); ++i) pos[events[i].region.actions[0]] = i;
  int forward = 0;
  for (const auto& f : m.flows()) forward += pos[f.from] < pos[f.to];
  EXPECT_GE(forward, static_cast<int>(m.flows().size()) - 2);
  EXPECT_EQ(events.front().region.actions[0], "Order.create");
}

TEST(Negate, InventoryRevertTarget) {
  auto doc = occ::catalog::load("inventory");
  auto c = occ::dsl::compile(doc).value();
  auto ref = occ::negate(*c.behavior, "E1");
  ASSERT_TRUE(ref.ok());
  EXPECT_EQ(ref.value().target, "E1");
  EXPECT_EQ(ref.value(), occ::negate(*c.behavior, "E1").value());
  bool consumed = false;
  for (const auto& e : c.behavior->edges())
    consumed |= e.kind == occ::EdgeKind::Negative && e.to == ref.value().target && e.from == "E14";
  EXPECT_TRUE(consumed);

  auto missing = occ::negate(*c.behavior, "E99");
  ASSERT_FALSE(missing.ok());
  EXPECT_EQ(missing.errors()[0].rule, "UnknownEvent");
}

TEST(Events, StaticDocumentsHoldOnlySubsistingEvents) {
  for (const auto& name : occ::catalog::names()) {
    auto c = occ::dsl::compile(occ::catalog::load(name)).value();
    for (const auto& e : c.behavior->events()) {
      EXPECT_EQ(e.status, occ::EventStatus::Subsisting);
      EXPECT_FALSE(e.time.has_value());
    }
  }
}
