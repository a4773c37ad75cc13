#pragma once

// Deterministic executor for behavior graphs.
//
// One event fires per step, chosen by declaration order among the enabled
// events. When an event fires its effects are applied, then each outgoing
// sequence edge is armed or disarmed by evaluating its guard in the updated
// environment. An event is enabled when it is not actualized and either it
// is initial and has never fired, or an armed edge leads to it from an
// actualized event. External events additionally need a delivered stimulus.
//
// Reverting an event returns it to subsistence: it leaves the actualized set
// and the entity instances its region created are erased. Variable effects
// are not rolled back. Reverts happen through negative edges and through
// re-entry, when an armed sequence edge targets an event that is already
// actualized.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "occ/behavior_graph.hpp"
#include "occ/diagnostics.hpp"
#include "occ/expr.hpp"

namespace occ {

struct Instance {
  bool live = true;
  std::string created_by;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// FIFO in front of a downstream process. `empty` mirrors items.empty().
struct QueueComponent {
  std::string name;
  std::deque<std::string> items;
  bool empty = true;
  bool downstream_busy = false;

  friend bool operator==(const QueueComponent&, const QueueComponent&) = default;
};

struct Stimulus {
  std::string event;
  std::int64_t at = 0;

  friend bool operator==(const Stimulus&, const Stimulus&) = default;
};

enum class RecordKind { Fire, Revert, Stimulus };

inline const char* to_string(RecordKind k) {
  switch (k) {
    case RecordKind::Fire: return "fire";
    case RecordKind::Revert: return "revert";
    case RecordKind::Stimulus: return "stimulus";
  }
  return "?";
}

struct TraceRecord {
  std::int64_t step = 0;
  std::string event;
  RecordKind kind = RecordKind::Fire;
  Env env;  // variables written by the record, after the write

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

using Trace = std::vector<TraceRecord>;

inline nlohmann::ordered_json to_json(const Value& v) {
  if (auto i = std::get_if<std::int64_t>(&v)) return *i;
  if (auto b = std::get_if<bool>(&v)) return *b;
  return std::get<std::string>(v);
}

/// {"step":..,"event":..,"kind":..,"env":{..}} on one line, no trailing newline.
inline std::string to_json_line(const TraceRecord& r) {
  nlohmann::ordered_json j;
  j["step"] = r.step;
  j["event"] = r.event;
  j["kind"] = to_string(r.kind);
  nlohmann::ordered_json env = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.env) env[k] = to_json(v);
  j["env"] = env;
  return j.dump();
}

inline std::string to_json_lines(const Trace& trace) {
  std::string out;
  for (const auto& r : trace) out += to_json_line(r) + "\n";
  return out;
}

/// Execution state of one case instance. Refers to its BehaviorGraph, which
/// must outlive it. Confined to one thread at a time.
struct SimState {
  const BehaviorGraph* graph = nullptr;
  Env env;
  std::map<std::string, std::int64_t> actualized;  // event id -> step it fired
  std::set<std::string> fired_once;
  std::set<std::size_t> armed;  // sequence edge indices
  std::map<std::string, Instance> instances;
  std::map<std::string, QueueComponent> queues;
  std::int64_t step = 0;
  std::vector<Stimulus> stimuli;  // sorted by `at`, stable
  std::size_t delivered = 0;
  std::set<std::string> injected;  // delivered, not yet consumed
  Trace trace;

  SimState() = default;
  explicit SimState(const BehaviorGraph& bg) : graph(&bg) {}

  bool is_actualized(std::string_view id) const { return actualized.count(std::string(id)) > 0; }
  bool pending_stimuli() const { return delivered < stimuli.size(); }
};

namespace detail {

inline void guard_variables(const BehaviorGraph& bg, std::set<std::string>& out) {
  // Everything reachable from the initial events along sequence edges.
  std::set<std::size_t> seen;
  std::vector<std::size_t> work;
  for (const auto& id : bg.initial()) work.push_back(bg.position(id));
  while (!work.empty()) {
    auto i = work.back();
    work.pop_back();
    if (!seen.insert(i).second) continue;
    collect_variables(bg.events()[i].guard, out);
    for (auto k : bg.outgoing(i)) {
      const auto& e = bg.edges()[k];
      collect_variables(e.guard, out);
      if (e.kind == EdgeKind::Sequence) work.push_back(bg.position(e.to));
    }
  }
}

}  // namespace detail

/// Fresh state: step 0, nothing actualized, every queue empty and idle.
/// Throws Error(MissingBinding | UndeclaredVariable | BindingTypeError |
/// UnknownEvent).
inline SimState init_state(const BehaviorGraph& bg, const Env& bindings, std::vector<Stimulus> stimuli = {},
                           const std::vector<std::string>& queues = {}) {
  SimState s(bg);
  const StaticModel& model = bg.model();
  for (const auto& v : model.variables())
    if (v.initial) s.env[v.name] = *v.initial;
  for (const auto& [name, value] : bindings) {
    const VarDecl* v = model.find_variable(name);
    if (!v) throw Error("UndeclaredVariable", "binding for undeclared variable '" + name + "'");
    if (type_of(value) != v->type)
      throw Error("BindingTypeError", "binding for '" + name + "' is not " + std::string(to_string(v->type)));
    s.env[name] = value;
  }
  std::set<std::string> needed;
  detail::guard_variables(bg, needed);
  for (const auto& n : needed)
    if (!s.env.count(n)) throw Error("MissingBinding", "no value bound for '" + n + "'");

  for (const auto& st : stimuli)
    if (!bg.find_event(st.event)) throw Error("UnknownEvent", "stimulus for undefined event '" + st.event + "'");
  std::stable_sort(stimuli.begin(), stimuli.end(), [](const Stimulus& a, const Stimulus& b) { return a.at < b.at; });
  s.stimuli = std::move(stimuli);
  for (const auto& q : queues) s.queues[q] = QueueComponent{q, {}, true, false};
  return s;
}

/// Enabled events in declaration order. Throws Error(UnboundVariable) when an
/// event guard reads a variable that has no value.
inline std::vector<std::string> enabled_events(const BehaviorGraph& bg, const SimState& state) {
  std::vector<std::string> out;
  const auto& events = bg.events();
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& ev = events[i];
    if (state.is_actualized(ev.id)) continue;
    if (ev.external && !state.injected.count(ev.id)) continue;
    bool structural = bg.is_initial(ev.id) && !state.fired_once.count(ev.id);
    if (!structural) {
      for (auto k : bg.incoming(i)) {
        const auto& e = bg.edges()[k];
        if (e.kind == EdgeKind::Sequence && state.armed.count(k) && state.is_actualized(e.from)) {
          structural = true;
          break;
        }
      }
    }
    if (!structural) continue;
    if (ev.guard && !evaluate_guard(ev.guard, state.env)) continue;
    out.push_back(ev.id);
  }
  return out;
}

struct StepResult {
  enum class Kind { Fired, Quiescent };
  Kind kind = Kind::Quiescent;
  std::string event;
  std::vector<std::string> reverted;

  bool quiescent() const { return kind == Kind::Quiescent; }
};

namespace detail {

inline void deliver_due(SimState& s) {
  while (s.delivered < s.stimuli.size() && s.stimuli[s.delivered].at <= s.step) {
    const auto& st = s.stimuli[s.delivered++];
    s.injected.insert(st.event);
    s.trace.push_back({s.step, st.event, RecordKind::Stimulus, {}});
  }
}

inline void revert(SimState& s, const std::string& id, std::vector<std::string>& reverted) {
  if (!s.actualized.erase(id)) return;
  for (auto& [label, inst] : s.instances)
    if (inst.live && inst.created_by == id) inst.live = false;
  s.trace.push_back({s.step, id, RecordKind::Revert, {}});
  reverted.push_back(id);
}

inline void fire(SimState& s, const std::string& id, StepResult& result) {
  const BehaviorGraph& bg = *s.graph;
  const std::size_t i = bg.position(id);
  const Event& ev = bg.events()[i];
  const StaticModel& model = bg.model();

  s.injected.erase(id);
  const std::size_t record = s.trace.size();
  s.trace.push_back({s.step, id, RecordKind::Fire, {}});

  for (const auto& eff : ev.effects) {
    Value v = evaluate(eff.value, s.env, "EffectTypeError");
    const VarDecl* decl = model.find_variable(eff.target);
    if (!decl || type_of(v) != decl->type)
      throw Error("EffectTypeError", "effect " + to_string(eff) + " of " + id + " produced the wrong type");
    s.env[eff.target] = v;
    s.trace[record].env[eff.target] = v;
  }
  s.actualized[id] = s.step;
  s.fired_once.insert(id);
  for (const auto& a : ev.region.actions) {
    const Action* act = model.find_action(a);
    if (act && act->kind == ActionKind::Create && !act->entity.empty()) s.instances[act->entity] = {true, id};
  }

  result.kind = StepResult::Kind::Fired;
  result.event = id;
  for (auto k : bg.outgoing(i)) {
    const auto& e = bg.edges()[k];
    if (e.kind == EdgeKind::Sequence) {
      if (evaluate_guard(e.guard, s.env)) {
        s.armed.insert(k);
        if (e.to != id && s.is_actualized(e.to)) revert(s, e.to, result.reverted);
      } else {
        s.armed.erase(k);
      }
    } else {
      revert(s, e.to, result.reverted);
    }
  }
  ++s.step;
}

}  // namespace detail

/// Fires the first enabled event. With nothing enabled, time advances to the
/// next pending stimulus; with none left the state is quiescent and
/// unchanged. Throws Error(UnboundVariable | EffectTypeError | GuardTypeError).
inline StepResult step(SimState& state) {
  StepResult result;
  detail::deliver_due(state);
  auto enabled = enabled_events(*state.graph, state);
  while (enabled.empty() && state.pending_stimuli()) {
    state.step = std::max(state.step, state.stimuli[state.delivered].at);
    detail::deliver_due(state);
    enabled = enabled_events(*state.graph, state);
  }
  if (enabled.empty()) return result;
  detail::fire(state, enabled.front(), result);
  return result;
}

/// Steps until quiescence or `max_steps` firings; returns the records
/// appended by this call.
inline Trace run(SimState& state, std::int64_t max_steps) {
  const std::size_t begin = state.trace.size();
  for (std::int64_t n = 0; n < max_steps; ++n)
    if (step(state).quiescent()) break;
  return Trace(state.trace.begin() + static_cast<std::ptrdiff_t>(begin), state.trace.end());
}

// ---------------------------------------------------------------------------
// Queue component

/// The events of the queue process, numbered as in its dynamic model.
enum class QueueEvent {
  Receive = 1,  // an order arrives
  Enqueue,      // it is put into Q
  NotEmpty,     // Q is marked not empty
  NotBusy,      // the downstream process is free
  Retrieve,     // the head of Q is sent downstream
  LeftEmpty,    // the retrieval left Q empty
  FlagEmpty,    // Q is marked empty
};

inline const char* to_string(QueueEvent e) {
  switch (e) {
    case QueueEvent::Receive: return "receive";
    case QueueEvent::Enqueue: return "enqueue";
    case QueueEvent::NotEmpty: return "not_empty";
    case QueueEvent::NotBusy: return "not_busy";
    case QueueEvent::Retrieve: return "retrieve";
    case QueueEvent::LeftEmpty: return "left_empty";
    case QueueEvent::FlagEmpty: return "flag_empty";
  }
  return "?";
}

struct QueueStimulus {
  enum class Kind { Arrive, DownstreamFree, DownstreamBusy };
  Kind kind = Kind::Arrive;
  std::string instance;  // Arrive only

  static QueueStimulus arrive(std::string id) { return {Kind::Arrive, std::move(id)}; }
  static QueueStimulus free() { return {Kind::DownstreamFree, {}}; }
  static QueueStimulus busy() { return {Kind::DownstreamBusy, {}}; }
};

struct QueueStep {
  std::vector<QueueEvent> events;
  std::optional<std::string> dequeued;
};

/// Applies one stimulus to a queue. Whenever the queue holds items and the
/// downstream process is idle, the head is handed downstream, which is then
/// busy. Freeing the downstream of an empty queue only clears the busy flag. There is no capacity limit. Queue
/// transitions append trace records but do not advance the step counter.
/// Throws Error(UnknownQueue).
inline QueueStep queue_transition(SimState& state, const std::string& queue, const QueueStimulus& stimulus) {
  auto it = state.queues.find(queue);
  if (it == state.queues.end()) throw Error("UnknownQueue", "no queue named '" + queue + "'");
  QueueComponent& q = it->second;
  QueueStep out;
  auto emit = [&](QueueEvent e) {
    out.events.push_back(e);
    state.trace.push_back({state.step, queue + "." + to_string(e), RecordKind::Fire, {}});
  };

  auto dispatch = [&] {
    if (q.downstream_busy || q.items.empty()) return;
    emit(QueueEvent::NotBusy);
    out.dequeued = q.items.front();
    q.items.pop_front();
    q.downstream_busy = true;
    emit(QueueEvent::Retrieve);
    if (q.items.empty()) {
      emit(QueueEvent::LeftEmpty);
      q.empty = true;
      emit(QueueEvent::FlagEmpty);
    }
  };

  switch (stimulus.kind) {
    case QueueStimulus::Kind::Arrive:
      emit(QueueEvent::Receive);
      q.items.push_back(stimulus.instance);
      emit(QueueEvent::Enqueue);
      if (q.empty) emit(QueueEvent::NotEmpty);
      q.empty = false;
      dispatch();
      break;
    case QueueStimulus::Kind::DownstreamFree:
      q.downstream_busy = false;
      dispatch();
      break;
    case QueueStimulus::Kind::DownstreamBusy:
      q.downstream_busy = true;
      break;
  }
  return out;
}

}  // namespace occ
