#pragma once

#include <memory>
#include <string>
#include <vector>

#include "occ/behavior_graph.hpp"
#include "occ/dsl/document.hpp"
#include "occ/event_model.hpp"
#include "occ/sim_engine.hpp"
#include "occ/static_model.hpp"
#include "occ/timeline.hpp"

namespace occ::dsl {

/// A document turned into checked models.
struct Compiled {
  std::shared_ptr<const StaticModel> model;
  std::shared_ptr<const BehaviorGraph> behavior;  // empty graph when no events are declared
  std::vector<Timeline> timelines;
  Diagnostics warnings;
};

/// Builds and validates every part of `doc`. Semantic errors from all parts
/// are reported together; a broken static model stops further checks.
inline Result<Compiled> compile(const Document& doc) {
  auto model = build_model(doc.model);
  if (!model) return model.errors();
  Compiled out;
  out.model = std::make_shared<const StaticModel>(std::move(model).value());

  Diagnostics errors;
  std::vector<Event> events;
  for (const auto& d : doc.events) {
    auto e = define_event(*out.model, {d.id, d.label, d.actions, d.arcs, d.guard, d.effects, d.external, d.span});
    if (!e) {
      for (const auto& err : e.errors()) errors.push_back(err);
      continue;
    }
    events.push_back(std::move(e).value());
  }
  if (errors.empty()) {
    std::vector<BehaviorEdge> edges;
    for (const auto& e : doc.edges) edges.push_back({e.from, e.to, e.kind, e.guard, e.span});
    auto bg = build_behavior(out.model, std::move(events), std::move(edges));
    if (bg) {
      out.behavior = std::make_shared<const BehaviorGraph>(std::move(bg).value());
      out.warnings = out.behavior->warnings();
    } else {
      errors = bg.errors();
    }
  }

  const auto types = out.model->variable_types();
  std::set<std::string> event_ids;
  for (const auto& e : doc.events) event_ids.insert(e.id);
  for (const auto& s : doc.scenarios) {
    for (const auto& [var, value] : s.bindings) {
      auto it = types.find(var);
      if (it == types.end())
        errors.push_back({"UndeclaredVariable", "scenario '" + s.name + "' binds undeclared '" + var + "'", s.span, var});
      else if (type_of(value) != it->second)
        errors.push_back({"BindingTypeError",
                          "scenario '" + s.name + "' binds '" + var + "' to a " + to_string(type_of(value)) +
                              " value, expected " + to_string(it->second),
                          s.span, var});
    }
    for (const auto& st : s.stimuli)
      if (!event_ids.count(st.event))
        errors.push_back(
            {"UnknownEvent", "scenario '" + s.name + "' stimulates undefined event '" + st.event + "'", s.span, st.event});
  }

  for (const auto& tl : doc.timelines) {
    for (auto d : check_timeline(tl)) {
      if (!d.span.known()) d.span = tl.span;
      errors.push_back(std::move(d));
    }
    out.timelines.push_back(tl);
  }

  if (!errors.empty()) return errors;
  return out;
}

/// Fresh simulation state for a named scenario of `doc`. Throws
/// Error(UnknownScenario) and everything init_state() throws.
inline SimState start_scenario(const Compiled& compiled, const Document& doc, std::string_view scenario) {
  const ScenarioDecl* s = doc.find_scenario(scenario);
  if (!s) throw Error("UnknownScenario", "no scenario named '" + std::string(scenario) + "'");
  if (!compiled.behavior) throw Error("NoBehavior", "the document declares no events");
  Env bindings;
  for (const auto& [var, value] : s->bindings) bindings[var] = value;
  std::vector<std::string> queues;
  for (const auto& q : doc.queues) queues.push_back(q.name);
  return init_state(*compiled.behavior, bindings, s->stimuli, queues);
}

}  // namespace occ::dsl
