#pragma once

#include <algorithm>
#include <set>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "occ/behavior_graph.hpp"
#include "occ/expr.hpp"
#include "occ/sim_engine.hpp"
#include "occ/static_model.hpp"
#include "occ/timeline.hpp"

namespace occ::dsl {

struct EventDecl {
  std::string id;
  std::string label;
  std::vector<std::string> actions;  // listed on their own, outside any arc
  std::vector<ArcRef> arcs;
  std::vector<Assignment> effects;
  ExprPtr guard;
  bool external = false;
  std::string note;
  SourceSpan span;
};

struct EdgeDecl {
  std::string from;
  std::string to;
  EdgeKind kind = EdgeKind::Sequence;
  ExprPtr guard;
  SourceSpan span;
};

struct QueueDecl {
  std::string name;
  SourceSpan span;
};

struct ScenarioDecl {
  std::string name;
  std::vector<std::pair<std::string, Value>> bindings;
  std::vector<Stimulus> stimuli;
  SourceSpan span;
};

/// Everything one `.tm` file declares.
struct Document {
  std::string file;
  ModelDecl model;
  std::vector<QueueDecl> queues;
  std::vector<EventDecl> events;
  std::vector<EdgeDecl> edges;
  std::vector<ScenarioDecl> scenarios;
  std::vector<Timeline> timelines;

  const ScenarioDecl* find_scenario(std::string_view name) const {
    for (const auto& s : scenarios)
      if (s.name == name) return &s;
    return nullptr;
  }
};

namespace detail {

inline bool same(const ActionDecl& a, const ActionDecl& b) {
  return a.kind == b.kind && a.local_name() == b.local_name() && a.entity == b.entity;
}
inline bool same(const ThimacDecl& a, const ThimacDecl& b) {
  return a.name == b.name && a.parent == b.parent && a.note == b.note &&
         std::equal(a.actions.begin(), a.actions.end(), b.actions.begin(), b.actions.end(),
                    [](const ActionDecl& x, const ActionDecl& y) { return same(x, y); });
}
inline std::vector<std::tuple<std::string, std::string, std::string>> arc_set(const std::vector<ArcDecl>& arcs) {
  std::vector<std::tuple<std::string, std::string, std::string>> out;
  for (const auto& a : arcs) out.emplace_back(a.from, a.to, a.label);
  std::sort(out.begin(), out.end());
  return out;
}
inline bool same(const EventDecl& a, const EventDecl& b) {
  return a.id == b.id && a.label == b.label && a.actions == b.actions && a.arcs == b.arcs &&
         a.external == b.external && a.note == b.note && equal(a.guard, b.guard) &&
         std::equal(a.effects.begin(), a.effects.end(), b.effects.begin(), b.effects.end(),
                    [](const Assignment& x, const Assignment& y) { return equal(x, y); });
}
inline bool same(const EdgeDecl& a, const EdgeDecl& b) {
  return a.from == b.from && a.to == b.to && a.kind == b.kind && equal(a.guard, b.guard);
}
inline bool same(const ScenarioDecl& a, const ScenarioDecl& b) {
  return a.name == b.name && a.bindings == b.bindings && a.stimuli == b.stimuli;
}
inline bool same(const QueueDecl& a, const QueueDecl& b) { return a.name == b.name; }

template <typename T>
bool same_list(const std::vector<T>& a, const std::vector<T>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const T& x, const T& y) { return same(x, y); });
}

}  // namespace detail

/// Equality that ignores source positions and treats flow and trigger arcs
/// as sets.
inline bool structurally_equal(const Document& a, const Document& b) {
  return a.model.variables == b.model.variables && detail::same_list(a.model.thimacs, b.model.thimacs) &&
         detail::arc_set(a.model.flows) == detail::arc_set(b.model.flows) &&
         detail::arc_set(a.model.triggers) == detail::arc_set(b.model.triggers) &&
         detail::same_list(a.queues, b.queues) && detail::same_list(a.events, b.events) &&
         detail::same_list(a.edges, b.edges) && detail::same_list(a.scenarios, b.scenarios) &&
         a.timelines == b.timelines;
}

}  // namespace occ::dsl
