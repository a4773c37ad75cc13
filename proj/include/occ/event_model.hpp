#pragma once

// Dynamic-level vocabulary: a region is a connected piece of the static
// model, an event is a region that can be actualized in time.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "occ/diagnostics.hpp"
#include "occ/expr.hpp"
#include "occ/static_model.hpp"

namespace occ {

struct Region {
  std::vector<std::string> actions;
  std::vector<ArcRef> arcs;

  friend bool operator==(const Region&, const Region&) = default;
};

enum class EventStatus { Subsisting, Actualized };

struct Event {
  std::string id;
  std::string label;
  Region region;
  ExprPtr guard;
  std::vector<Assignment> effects;
  bool external = false;  // enabled only after a scenario stimulus
  EventStatus status = EventStatus::Subsisting;
  std::optional<std::int64_t> time;
  SourceSpan span;
};

/// What define_event needs to know; arc endpoints join the action set.
struct EventSpec {
  std::string id;
  std::string label;
  std::vector<std::string> actions;
  std::vector<ArcRef> arcs;
  ExprPtr guard;
  std::vector<Assignment> effects;
  bool external = false;
  SourceSpan span;
};

inline bool regions_connected(const std::vector<std::string>& actions, const std::vector<ArcRef>& arcs) {
  if (actions.empty()) return false;
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < actions.size(); ++i) pos[actions[i]] = i;
  std::vector<std::size_t> parent(actions.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& a : arcs) parent[find(pos.at(a.from))] = find(pos.at(a.to));
  const std::size_t root = find(0);
  for (std::size_t i = 1; i < actions.size(); ++i)
    if (find(i) != root) return false;
  return true;
}

/// Builds a subsisting event over `model`. Errors: EmptyRegion,
/// DisconnectedRegion, UnknownId, UndeclaredVariable, GuardTypeError,
/// EffectTypeError, NotValidated.
inline Result<Event> define_event(const StaticModel& model, const EventSpec& spec) {
  if (!model.validated())
    return Diagnostic{"NotValidated", "events can only be defined over a validated model", spec.span, spec.id};
  Diagnostics errors;

  if (spec.actions.empty() && spec.arcs.empty())
    return Diagnostic{"EmptyRegion", "event '" + spec.id + "' has an empty region", spec.span, spec.id};

  Region region;
  auto add_action = [&](const std::string& id) {
    if (std::find(region.actions.begin(), region.actions.end(), id) == region.actions.end())
      region.actions.push_back(id);
  };
  for (const auto& id : spec.actions) {
    if (!model.find_action(id)) {
      errors.push_back({"UnknownId", "action '" + id + "' is not in the model", spec.span, id});
      continue;
    }
    add_action(id);
  }
  for (const auto& arc : spec.arcs) {
    if (!model.has_arc(arc)) {
      errors.push_back({"UnknownId", "arc " + to_string(arc) + " is not in the model", spec.span, to_string(arc)});
      continue;
    }
    add_action(arc.from);
    add_action(arc.to);
    if (std::find(region.arcs.begin(), region.arcs.end(), arc) == region.arcs.end()) region.arcs.push_back(arc);
  }
  if (errors.empty() && !regions_connected(region.actions, region.arcs))
    errors.push_back({"DisconnectedRegion", "region of event '" + spec.id + "' is not connected", spec.span, spec.id});

  const auto types = model.variable_types();
  if (spec.guard) {
    auto t = typecheck(spec.guard, types, "GuardTypeError");
    if (!t) {
      for (auto d : t.errors()) {
        d.span = spec.span;
        errors.push_back(std::move(d));
      }
    } else if (t.value() != Type::Bool) {
      errors.push_back({"GuardTypeError", "guard of '" + spec.id + "' is not boolean", spec.span, spec.id});
    }
  }
  for (const auto& eff : spec.effects) {
    auto target = types.find(eff.target);
    if (target == types.end()) {
      errors.push_back({"UndeclaredVariable", "effect assigns undeclared '" + eff.target + "'", spec.span, eff.target});
      continue;
    }
    auto t = typecheck(eff.value, types, "EffectTypeError");
    if (!t) {
      for (auto d : t.errors()) {
        d.span = spec.span;
        errors.push_back(std::move(d));
      }
    } else if (t.value() != target->second) {
      errors.push_back({"EffectTypeError", "effect " + to_string(eff) + " assigns the wrong type", spec.span,
                        eff.target});
    }
  }
  if (!errors.empty()) return errors;

  Event e;
  e.id = spec.id;
  e.label = spec.label;
  e.region = std::move(region);
  e.guard = spec.guard;
  e.effects = spec.effects;
  e.external = spec.external;
  e.span = spec.span;
  return e;
}

/// One single-action event per action, in topological order of the flow
/// arcs with ties (and cycles) broken by declaration order.
inline std::vector<Event> decompose_generic(const StaticModel& model) {
  const auto& actions = model.actions();
  std::vector<int> indegree(actions.size(), 0);
  std::vector<std::vector<std::size_t>> succ(actions.size());
  for (const auto& f : model.flows()) {
    auto from = model.action_position(f.from);
    auto to = model.action_position(f.to);
    succ[from].push_back(to);
    ++indegree[to];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (indegree[i] == 0) ready.push(i);
  std::vector<bool> placed(actions.size(), false);
  std::vector<std::size_t> order;
  while (order.size() < actions.size()) {
    if (ready.empty()) {
      // Only cycles remain: release the earliest unplaced action.
      for (std::size_t i = 0; i < actions.size(); ++i)
        if (!placed[i]) {
          indegree[i] = 0;
          ready.push(i);
          break;
        }
    }
    std::size_t cur = ready.top();
    ready.pop();
    if (placed[cur]) continue;
    placed[cur] = true;
    order.push_back(cur);
    for (auto n : succ[cur])
      if (!placed[n] && --indegree[n] == 0) ready.push(n);
  }

  std::vector<Event> out;
  out.reserve(order.size());
  for (std::size_t i : order) {
    const Action& a = actions[i];
    Event e;
    e.id = "E" + std::to_string(out.size() + 1);
    e.label = std::string(to_string(a.kind)) + " " + a.owner;
    if (!a.entity.empty()) e.label += " (" + a.entity + ")";
    e.region.actions = {a.id};
    e.span = a.span;
    out.push_back(std::move(e));
  }
  return out;
}

/// Reference to an event whose actualization is to be undone.
struct NegativeEventRef {
  std::string target;

  friend bool operator==(const NegativeEventRef&, const NegativeEventRef&) = default;
};

inline Result<NegativeEventRef> negate(std::span<const Event> events, std::string_view id) {
  for (const auto& e : events)
    if (e.id == id) return NegativeEventRef{e.id};
  return Diagnostic{"UnknownEvent", "event '" + std::string(id) + "' is not defined", {}, std::string(id)};
}

}  // namespace occ
