#include <gtest/gtest.h>

#include "occ/catalog.hpp"
#include "occ/dsl/compile.hpp"
#include "occ/sim_engine.hpp"

namespace {

struct Loaded {
  occ::dsl::Document doc;
  occ::dsl::Compiled compiled;
};

Loaded load(std::string_view entry) {
  Loaded l{occ::catalog::load(entry), {}};
  l.compiled = occ::dsl::compile(l.doc).value();
  return l;
}

occ::Result<occ::dsl::Compiled> compile_text(const std::string& text) {
  return occ::dsl::compile(occ::dsl::parse(text).value());
}

const char* kOneThimac = "var N: int in 0..3\nthimac A { create }\n";

}  // namespace

TEST(BuildBehavior, InventoryGraph) {
  auto l = load("inventory");
  const auto& bg = *l.compiled.behavior;
  EXPECT_EQ(bg.events().size(), 14u);
  EXPECT_EQ(bg.initial(), std::vector<std::string>{"E1"});
  int negative = 0;
  for (const auto& e : bg.edges()) negative += e.kind == occ::EdgeKind::Negative;
  EXPECT_EQ(negative, 1);
  auto guard_of = [&](const std::string& to) {
    for (const auto& e : bg.edges())
      if (e.from == "E4" && e.to == to) return occ::to_string(e.guard);
    return std::string("<none>");
  };
  EXPECT_EQ(guard_of("E5"), "Quantity <= Inventory");
  EXPECT_EQ(guard_of("E11"), "Inventory == 0");
  EXPECT_EQ(guard_of("E12"), "Quantity > Inventory && Inventory > 0");
  EXPECT_TRUE(bg.warnings().empty()) << bg.warnings()[0];
}

TEST(BuildBehavior, SingleEventIsInitial) {
  auto c = compile_text(std::string(kOneThimac) + "event E1 = region { A.create }\n");
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c.value().behavior->initial(), std::vector<std::string>{"E1"});
}

TEST(BuildBehavior, EdgeToUndefinedEvent) {
  auto c = compile_text(std::string(kOneThimac) + "event E1 = region { A.create }\nedge E1 -> E9\n");
  ASSERT_FALSE(c.ok());
  EXPECT_EQ(c.errors()[0].rule, "UnknownEvent");
  EXPECT_EQ(c.errors()[0].span.line, 4);
}

TEST(BuildBehavior, GuardTypeError) {
  auto c = compile_text(std::string(kOneThimac) +
                        "event E1 = region { A.create }\nevent E2 = region { A.create }\nedge E1 -> E2 guard N + 1\n");
  ASSERT_FALSE(c.ok());
  EXPECT_EQ(c.errors()[0].rule, "GuardTypeError");
}

TEST(BuildBehavior, GuardedNegativeEdgeRejected) {
  auto c = compile_text(std::string(kOneThimac) +
                        "event E1 = region { A.create }\nevent E2 = region { A.create }\nnegedge E2 -> revert E1 guard N > 0\n");
  ASSERT_FALSE(c.ok());
  EXPECT_EQ(c.errors()[0].rule, "GuardedNegativeEdge");
}

TEST(BuildBehavior, OverlappingBranchesWarn) {
  auto c = compile_text(std::string(kOneThimac) +
                        "event E1 = region { A.create }\nevent E2 = region { A.create }\nevent E3 = region { A.create }\n"
                        "edge E1 -> E2 guard N > 0\nedge E1 -> E3 guard N < 2\n");
  ASSERT_TRUE(c.ok());
  ASSERT_EQ(c.value().behavior->warnings().size(), 1u);
  EXPECT_EQ(c.value().behavior->warnings()[0].rule, "UnguardedBranch");
  EXPECT_TRUE(c.value().behavior->warnings()[0].warning);

  auto exclusive = compile_text(std::string(kOneThimac) +
                                "event E1 = region { A.create }\nevent E2 = region { A.create }\nevent E3 = region { A.create }\n"
                                "edge E1 -> E2 guard N > 1\nedge E1 -> E3 guard N <= 1\n");
  EXPECT_TRUE(exclusive.value().behavior->warnings().empty());
}

TEST(EnabledEvents, FreshInventory) {
  auto l = load("inventory");
  const auto& bg = *l.compiled.behavior;
  // Quantity is only read after E4; the initial event does not need it.
  auto state = occ::init_state(bg, {{"Inventory", std::int64_t{5}}, {"Quantity", std::int64_t{1}}});
  EXPECT_EQ(occ::enabled_events(bg, state), std::vector<std::string>{"E1"});
}

TEST(EnabledEvents, AfterComparisonWithEmptyStock) {
  auto l = load("inventory");
  const auto& bg = *l.compiled.behavior;
  auto state = occ::init_state(bg, {{"Inventory", std::int64_t{0}}, {"Quantity", std::int64_t{2}}});
  for (int i = 0; i < 4; ++i) occ::step(state);
  ASSERT_TRUE(state.is_actualized("E4"));
  EXPECT_EQ(occ::enabled_events(bg, state), std::vector<std::string>{"E11"});
}

TEST(EnabledEvents, QuiescentWhenEverythingFired) {
  auto l = load("socrates");
  const auto& bg = *l.compiled.behavior;
  auto state = occ::init_state(bg, {});
  occ::run(state, 100);
  EXPECT_EQ(state.actualized.size(), 3u);
  EXPECT_TRUE(occ::enabled_events(bg, state).empty());
}

TEST(EnabledEvents, UnboundGuardVariable) {
  auto c = compile_text(std::string(kOneThimac) + "event E1 = region { A.create }\n  guard N > 0\n").value();
  occ::SimState s(*c.behavior);
  try {
    occ::enabled_events(*c.behavior, s);
    FAIL() << "expected UnboundVariable";
  } catch (const occ::Error& e) {
    EXPECT_EQ(e.rule(), "UnboundVariable");
  }
}

TEST(EnabledEvents, Deterministic) {
  auto l = load("inventory");
  const auto& bg = *l.compiled.behavior;
  auto a = occ::init_state(bg, {{"Inventory", std::int64_t{5}}, {"Quantity", std::int64_t{3}}});
  auto b = occ::init_state(bg, {{"Inventory", std::int64_t{5}}, {"Quantity", std::int64_t{3}}});
  for (int i = 0; i < 12; ++i) {
    EXPECT_EQ(occ::enabled_events(bg, a), occ::enabled_events(bg, b));
    for (const auto& id : occ::enabled_events(bg, a)) EXPECT_FALSE(a.is_actualized(id));
    occ::step(a);
    occ::step(b);
  }
}

// Exactly one of the three comparison branches is open for every input.
TEST(Guards, ComparisonBranchesPartitionTheGrid) {
  auto l = load("inventory");
  std::vector<occ::ExprPtr> guards;
  for (const auto& e : l.compiled.behavior->edges())
    if (e.from == "E4") guards.push_back(e.guard);
  ASSERT_EQ(guards.size(), 3u);
  for (std::int64_t inv = 0; inv <= 100; ++inv)
    for (std::int64_t qty = 1; qty <= 100; ++qty) {
      occ::Env env{{"Inventory", inv}, {"Quantity", qty}};
      int open = 0;
      for (const auto& g : guards) open += occ::evaluate_guard(g, env);
      ASSERT_EQ(open, 1) << "Inventory=" << inv << " Quantity=" << qty;
    }
}
