#include <gtest/gtest.h>

#include "occ/catalog.hpp"
#include "occ/dsl/compile.hpp"
#include "occ/dsl/export.hpp"
#include "occ/dsl/parser.hpp"
#include "occ/dsl/serializer.hpp"
#include "oracle/dot_check.hpp"
#include "oracle/random_graph.hpp"

namespace {

occ::dsl::Document parse_ok(const std::string& text) {
  auto d = occ::dsl::parse(text, "t.tm");
  EXPECT_TRUE(d.ok()) << d.first_error();
  return d.ok() ? std::move(d).value() : occ::dsl::Document{};
}

void expect_round_trip(const occ::dsl::Document& doc) {
  const std::string text = occ::dsl::serialize(doc);
  auto again = occ::dsl::parse(text, "again.tm");
  ASSERT_TRUE(again.ok()) << again.first_error() << "\n" << text;
  EXPECT_TRUE(occ::dsl::structurally_equal(doc, again.value())) << text;
  EXPECT_EQ(occ::dsl::serialize(again.value()), text);
}

}  // namespace

TEST(Parse, ThimacWithCreate) {
  auto doc = parse_ok("thimac Customer { create order }");
  ASSERT_EQ(doc.model.thimacs.size(), 1u);
  const auto& t = doc.model.thimacs[0];
  EXPECT_EQ(t.name, "Customer");
  ASSERT_EQ(t.actions.size(), 1u);
  EXPECT_EQ(t.actions[0].kind, occ::ActionKind::Create);
  EXPECT_EQ(t.actions[0].entity, "order");
  EXPECT_EQ(t.span.line, 1);
  EXPECT_EQ(t.span.column, 1);
}

TEST(Parse, EmptyInput) {
  auto doc = parse_ok("");
  EXPECT_TRUE(doc.model.thimacs.empty());
  EXPECT_TRUE(doc.events.empty());
  auto only_comments = parse_ok("# nothing here\n\n  # still nothing\n");
  EXPECT_TRUE(occ::dsl::structurally_equal(doc, only_comments));
}

TEST(Parse, IllegalFlowIsSemanticErrorWithSpan) {
  auto doc = parse_ok("thimac Customer { create order release process }\n"
                      "flow order: Customer.release -> Customer.process\n");
  auto c = occ::dsl::compile(doc);
  ASSERT_FALSE(c.ok());
  bool found = false;
  for (const auto& e : c.errors())
    if (e.rule == "IllegalAdjacency") {
      found = true;
      EXPECT_EQ(e.span.file, "t.tm");
      EXPECT_EQ(e.span.line, 2);
      EXPECT_GE(e.span.column, 1);
    }
  EXPECT_TRUE(found);
}

TEST(Parse, NestedThimacsAndNamedActions) {
  auto doc = parse_ok(R"(
thimac Shop {
  note "the shop"
  thimac Ordered {
    create quantity
    process
    transfer in as stock
  }
}
)");
  ASSERT_EQ(doc.model.thimacs.size(), 2u);
  EXPECT_EQ(doc.model.thimacs[0].note, "the shop");
  EXPECT_EQ(doc.model.thimacs[1].parent, "Shop");
  EXPECT_EQ(doc.model.thimacs[1].actions[2].local_name(), "stock");
  EXPECT_EQ(doc.model.thimacs[1].actions[2].kind, occ::ActionKind::TransferIn);
}

TEST(Parse, CreateWithoutEntityBeforeAnotherAction) {
  auto doc = parse_ok("thimac A { create process }");
  ASSERT_EQ(doc.model.thimacs[0].actions.size(), 2u);
  EXPECT_EQ(doc.model.thimacs[0].actions[0].entity, "");
}

TEST(Parse, EventsEdgesScenariosTimelines) {
  auto doc = parse_ok(R"(
var N: int = 1 in 0..4
var Ok: bool
thimac A { create thing  process }
flow A.create -> A.process
event E1 "first" = region { A.create -> A.process }
  effect N := N + 1
  guard N < 3
event E2 = region { A.process }
  external
edge E1 -> E2 guard Ok
negedge E2 -> revert E1
scenario "two-words" {
  bind Ok = true
  stimulus E2 at 4
}
timeline t {
  event X: admission "in" at 2020-01-01
  event Y from 2020-01-02 to 2020-01-05
  event Z after 2020-01-09
  event W unknown
}
)");
  ASSERT_EQ(doc.events.size(), 2u);
  EXPECT_EQ(doc.events[0].label, "first");
  EXPECT_EQ(doc.events[0].arcs.size(), 1u);
  EXPECT_EQ(doc.events[0].effects.size(), 1u);
  EXPECT_TRUE(doc.events[0].guard);
  EXPECT_TRUE(doc.events[1].external);
  ASSERT_EQ(doc.edges.size(), 2u);
  EXPECT_EQ(doc.edges[1].kind, occ::EdgeKind::Negative);
  ASSERT_NE(doc.find_scenario("two-words"), nullptr);
  EXPECT_EQ(doc.find_scenario("two-words")->stimuli[0].at, 4);
  ASSERT_EQ(doc.timelines.size(), 1u);
  EXPECT_EQ(doc.timelines[0].events.size(), 4u);
  EXPECT_EQ(doc.timelines[0].events[0].category, occ::Category::Admission);
  EXPECT_EQ(doc.timelines[0].events[2].anchor.kind, occ::TimeAnchor::Kind::After);
  EXPECT_TRUE(occ::dsl::compile(doc).ok()) << occ::dsl::compile(doc).first_error();
  expect_round_trip(doc);
}

TEST(Parse, EdgeChainExpands) {
  auto doc = parse_ok("thimac A { create }\nevent E1 = region { A.create }\nevent E2 = region { A.create }\n"
                      "event E3 = region { A.create }\nedge E1 -> E2 -> E3\n");
  ASSERT_EQ(doc.edges.size(), 2u);
  EXPECT_EQ(doc.edges[1].from, "E2");
  EXPECT_EQ(doc.edges[1].to, "E3");
}

TEST(Parse, SyntaxErrorsAreAllReportedWithSpans) {
  const std::string text = "thimac A { create }\nthimac { }\nvar X int\nedge -> E2\nthimac B { create }\n";
  auto d = occ::dsl::parse(text, "bad.tm");
  ASSERT_FALSE(d.ok());
  EXPECT_GE(d.errors().size(), 3u);
  int lines = 1;
  for (char c : text) lines += c == '\n';
  for (const auto& e : d.errors()) {
    EXPECT_EQ(e.rule, "SyntaxError");
    EXPECT_EQ(e.span.file, "bad.tm");
    EXPECT_GE(e.span.line, 1);
    EXPECT_LE(e.span.line, lines);
    EXPECT_GE(e.span.column, 1);
  }
}

TEST(Parse, EverySyntaxErrorSpanPointsInsideInput) {
  // Truncations of a valid document hit the parser at many different places.
  const std::string full(occ::catalog::source("inventory"));
  for (std::size_t cut = 1; cut < full.size(); cut += 97) {
    const std::string text = full.substr(0, cut) + " } ) -> := @";
    auto d = occ::dsl::parse(text, "cut.tm");
    if (d.ok()) continue;
    std::vector<std::size_t> line_len{0};
    for (char c : text) {
      if (c == '\n')
        line_len.push_back(0);
      else
        ++line_len.back();
    }
    for (const auto& e : d.errors()) {
      ASSERT_GE(e.span.line, 1) << cut;
      ASSERT_LE(static_cast<std::size_t>(e.span.line), line_len.size()) << cut;
      EXPECT_GE(e.span.column, 1) << cut;
      EXPECT_LE(static_cast<std::size_t>(e.span.column), line_len[e.span.line - 1] + 1) << cut;
    }
  }
}

TEST(Parse, DuplicateNames) {
  for (const char* text : {"var X: int\nvar X: int\n", "thimac A { create }\nthimac A { create }\n",
                           "thimac A { create }\nevent E = region { A.create }\nevent E = region { A.create }\n",
                           "timeline t { event X at 2020-01-01 }\ntimeline t { event Y at 2020-01-01 }\n",
                           "scenario s { }\nscenario s { }\n"}) {
    auto d = occ::dsl::parse(text);
    ASSERT_FALSE(d.ok()) << text;
    EXPECT_TRUE(occ::has_rule(d.errors(), "DuplicateName")) << text;
    int last_line = 0;
    for (const char* c = text; *c; ++c) last_line += *c == '\n';
    EXPECT_EQ(d.errors().back().span.line, last_line) << text;
  }
}

TEST(Parse, IntegerOutOfRange) {
  EXPECT_FALSE(occ::dsl::parse("var X: int = 99999999999999999999999\n").ok());
}

TEST(Serialize, SocratesIsDeterministic) {
  auto doc = occ::catalog::load("socrates");
  const std::string a = occ::dsl::serialize(doc);
  EXPECT_EQ(a, occ::dsl::serialize(doc));
  EXPECT_EQ(a, occ::dsl::serialize(occ::catalog::load("socrates")));
  EXPECT_EQ(a.back(), '\n');
  EXPECT_NE(a.find("\n  create socrates\n"), std::string::npos) << a;
}

TEST(Serialize, ArcsAreSorted) {
  auto doc = parse_ok("thimac A { create process as p  process as q }\n"
                      "flow A.p -> A.q\nflow A.create -> A.p\n");
  const std::string text = occ::dsl::serialize(doc);
  EXPECT_LT(text.find("flow A.create -> A.p"), text.find("flow A.p -> A.q")) << text;
}

TEST(Serialize, CatalogRoundTripsAndStaysValid) {
  for (const auto& name : occ::catalog::names()) {
    SCOPED_TRACE(name);
    auto doc = occ::catalog::load(name);
    expect_round_trip(doc);
    auto again = occ::dsl::parse(occ::dsl::serialize(doc)).value();
    auto c = occ::dsl::compile(again);
    ASSERT_TRUE(c.ok()) << c.first_error();
    EXPECT_TRUE(occ::validate(*c.value().model).empty());
  }
}

TEST(Serialize, RandomDocumentsRoundTrip) {
  oracle::ModelGenerator gen(11);
  for (int i = 0; i < 200; ++i) {
    auto m = gen.next();
    auto doc = occ::dsl::parse(m.source);
    ASSERT_TRUE(doc.ok()) << doc.first_error() << "\n" << m.source;
    expect_round_trip(doc.value());
  }
}

TEST(ExportDot, SocratesStatic) {
  const std::string dot = occ::dsl::export_dot(occ::catalog::load("socrates"), occ::dsl::DotLevel::Static);
  EXPECT_EQ(oracle::dot_error(dot), "") << dot;
  EXPECT_NE(dot.find("subgraph \"cluster_Socrates\""), std::string::npos);
  EXPECT_NE(dot.find("label=\"create"), std::string::npos);
  EXPECT_NE(dot.find("label=\"process\""), std::string::npos);
  EXPECT_NE(dot.find("style=dashed"), std::string::npos);
}

TEST(ExportDot, InventoryBehaviorMarksNegativeEdge) {
  const std::string dot = occ::dsl::export_dot(occ::catalog::load("inventory"), occ::dsl::DotLevel::Behavior);
  EXPECT_EQ(oracle::dot_error(dot), "");
  EXPECT_NE(dot.find("\"E14\" -> \"E1\" [dir=both, arrowtail=diamond"), std::string::npos) << dot;
  EXPECT_EQ(dot.find("\"E4\" -> \"E5\" [dir=both"), std::string::npos);
}

TEST(ExportDot, EmptyDocument) {
  EXPECT_EQ(occ::dsl::export_dot({}, occ::dsl::DotLevel::Static), "digraph static {\n}\n");
  EXPECT_EQ(oracle::dot_error(occ::dsl::export_dot({}, occ::dsl::DotLevel::Behavior)), "");
}

TEST(ExportDot, EveryCatalogEntryIsValidDot) {
  for (const auto& name : occ::catalog::names())
    for (auto level : {occ::dsl::DotLevel::Static, occ::dsl::DotLevel::Behavior}) {
      const std::string dot = occ::dsl::export_dot(occ::catalog::load(name), level);
      EXPECT_EQ(oracle::dot_error(dot), "") << name << "\n" << dot;
    }
}

TEST(ExportDot, LabelsWithQuotesStayValid) {
  auto doc = parse_ok("thimac A { create \"say \\\"hi\\\"\" }\n"
                      "event E1 \"a \\\"quoted\\\" label\" = region { A.create }\n");
  for (auto level : {occ::dsl::DotLevel::Static, occ::dsl::DotLevel::Behavior})
    EXPECT_EQ(oracle::dot_error(occ::dsl::export_dot(doc, level)), "");
}

TEST(ExportDot, DotCheckerRejectsBrokenDot) {
  EXPECT_NE(oracle::dot_error("digraph {"), "");
  EXPECT_NE(oracle::dot_error("digraph { a -- b }"), "");
  EXPECT_NE(oracle::dot_error("digraph { \"a }"), "");
  EXPECT_NE(oracle::dot_error("graph { a -> b }"), "");
  EXPECT_EQ(oracle::dot_error("digraph g { a -> b [x=1]; subgraph s { c } }"), "");
}

TEST(ExportDot, UnsupportedLevel) {
  auto r = occ::dsl::export_dot(occ::dsl::Document{}, "dynamic");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.errors()[0].rule, "UnsupportedLevel");
}

TEST(ExportJson, MirrorsDocument) {
  auto doc = occ::catalog::load("inventory");
  auto j = occ::dsl::export_json(doc);
  EXPECT_EQ(j["tm_version"], 1);
  EXPECT_EQ(j["events"].size(), 14u);
  EXPECT_EQ(j["variables"].size(), doc.model.variables.size());
  EXPECT_EQ(j["thimacs"].size(), doc.model.thimacs.size());
  EXPECT_EQ(j["flows"].size(), doc.model.flows.size());
  EXPECT_EQ(j.dump(), occ::dsl::export_json(occ::catalog::load("inventory")).dump());
}
