#pragma once

// Static (subsistence) level: thimacs holding generic actions, joined by
// flow and trigger arcs.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "occ/diagnostics.hpp"
#include "occ/expr.hpp"

namespace occ {

/// The generic actions. Transfer is split into its two directed faces so the
/// boundary crossing between thimacs is explicit.
enum class ActionKind { Create, Process, Release, TransferIn, TransferOut, Receive };

inline constexpr std::array<ActionKind, 6> kActionKinds = {ActionKind::Create,     ActionKind::Process,
                                                           ActionKind::Release,    ActionKind::TransferIn,
                                                           ActionKind::TransferOut, ActionKind::Receive};

inline const char* to_string(ActionKind k) {
  switch (k) {
    case ActionKind::Create: return "create";
    case ActionKind::Process: return "process";
    case ActionKind::Release: return "release";
    case ActionKind::TransferIn: return "transfer_in";
    case ActionKind::TransferOut: return "transfer_out";
    case ActionKind::Receive: return "receive";
  }
  return "?";
}

inline std::optional<ActionKind> action_kind_from(std::string_view s) {
  for (auto k : kActionKinds)
    if (s == to_string(k)) return k;
  return std::nullopt;
}

/// Release, transfer and receive only move things across boundaries.
inline bool is_plumbing(ActionKind k) {
  return k == ActionKind::Release || k == ActionKind::TransferOut || k == ActionKind::TransferIn ||
         k == ActionKind::Receive;
}

/// Permitted flow successors of each action kind.
inline bool flow_permitted(ActionKind from, ActionKind to) {
  using K = ActionKind;
  switch (from) {
    case K::Create: return to == K::Process || to == K::Release;
    case K::Process: return to == K::Create || to == K::Process || to == K::Release;
    case K::Receive: return to == K::Process || to == K::Release;
    case K::Release: return to == K::TransferOut;
    case K::TransferOut: return to == K::TransferIn;
    case K::TransferIn: return to == K::Receive;
  }
  return false;
}

inline bool trigger_target_permitted(ActionKind to) { return to == ActionKind::Create || to == ActionKind::Process; }

// ---------------------------------------------------------------------------
// Declarations (input to assemble / build_model)

struct ActionDecl {
  ActionKind kind = ActionKind::Create;
  std::string name;    // local name inside the thimac; empty means the kind name
  std::string entity;  // label of the thing a create action brings about
  SourceSpan span;

  std::string local_name() const { return name.empty() ? std::string(to_string(kind)) : name; }
};

struct ThimacDecl {
  std::string name;
  std::optional<std::string> parent;
  std::vector<ActionDecl> actions;
  std::string note;
  SourceSpan span;
};

struct ArcDecl {
  std::string from;
  std::string to;
  std::string label;
  SourceSpan span;
};

struct VarDecl {
  std::string name;
  Type type = Type::Int;
  std::optional<Value> initial;
  std::optional<std::pair<std::int64_t, std::int64_t>> domain;  // inclusive, ints only
  SourceSpan span;

  friend bool operator==(const VarDecl& a, const VarDecl& b) {
    return a.name == b.name && a.type == b.type && a.initial == b.initial && a.domain == b.domain;
  }
};

struct ModelDecl {
  std::vector<VarDecl> variables;
  std::vector<ThimacDecl> thimacs;
  std::vector<ArcDecl> flows;
  std::vector<ArcDecl> triggers;
};

inline std::string action_id(std::string_view thimac, std::string_view local) {
  return std::string(thimac) + "." + std::string(local);
}

// ---------------------------------------------------------------------------
// Resolved model

struct Action {
  std::string id;
  ActionKind kind = ActionKind::Create;
  std::string owner;
  std::string entity;
  SourceSpan span;

  friend bool operator==(const Action& a, const Action& b) {
    return a.id == b.id && a.kind == b.kind && a.owner == b.owner && a.entity == b.entity;
  }
};

struct Thimac {
  std::string name;
  std::optional<std::string> parent;
  std::vector<std::string> actions;
  std::string note;
  SourceSpan span;

  friend bool operator==(const Thimac& a, const Thimac& b) {
    return a.name == b.name && a.parent == b.parent && a.actions == b.actions && a.note == b.note;
  }
};

struct FlowArc {
  std::string from;
  std::string to;
  std::string label;
  bool contracted = false;  // produced by simplify(); may cross thimacs directly
  SourceSpan span;

  friend bool operator==(const FlowArc& a, const FlowArc& b) {
    return a.from == b.from && a.to == b.to && a.label == b.label && a.contracted == b.contracted;
  }
};

struct TriggerArc {
  std::string from;
  std::string to;
  SourceSpan span;

  friend bool operator==(const TriggerArc& a, const TriggerArc& b) { return a.from == b.from && a.to == b.to; }
};

enum class ArcKind { Flow, Trigger };

/// Identifies an arc of a StaticModel by its kind and endpoints.
struct ArcRef {
  ArcKind kind = ArcKind::Flow;
  std::string from;
  std::string to;

  friend bool operator==(const ArcRef&, const ArcRef&) = default;
  friend auto operator<=>(const ArcRef&, const ArcRef&) = default;
};

inline std::string to_string(const ArcRef& a) {
  return a.from + (a.kind == ArcKind::Flow ? " -> " : " => ") + a.to;
}

using ValidationReport = Diagnostics;

class StaticModel;
Result<StaticModel> assemble(const ModelDecl& decl);
Result<StaticModel> build_model(const ModelDecl& decl);
Result<StaticModel> simplify(const StaticModel& model);

/// Forest of thimacs with their actions and arcs. Immutable once built;
/// obtain one through assemble() (structure only) or build_model()
/// (structure plus every well-formedness rule).
class StaticModel {
 public:
  StaticModel() = default;

  const std::vector<Thimac>& thimacs() const { return thimacs_; }
  const std::vector<Action>& actions() const { return actions_; }
  const std::vector<FlowArc>& flows() const { return flows_; }
  const std::vector<TriggerArc>& triggers() const { return triggers_; }
  const std::vector<VarDecl>& variables() const { return variables_; }

  bool validated() const { return validated_; }
  bool simplified() const { return simplified_; }

  const Action* find_action(std::string_view id) const {
    auto it = action_index_.find(std::string(id));
    return it == action_index_.end() ? nullptr : &actions_[it->second];
  }
  const Thimac* find_thimac(std::string_view name) const {
    for (const auto& t : thimacs_)
      if (t.name == name) return &t;
    return nullptr;
  }
  const VarDecl* find_variable(std::string_view name) const {
    for (const auto& v : variables_)
      if (v.name == name) return &v;
    return nullptr;
  }
  bool has_arc(const ArcRef& arc) const {
    if (arc.kind == ArcKind::Flow)
      return std::any_of(flows_.begin(), flows_.end(),
                         [&](const FlowArc& f) { return f.from == arc.from && f.to == arc.to; });
    return std::any_of(triggers_.begin(), triggers_.end(),
                       [&](const TriggerArc& t) { return t.from == arc.from && t.to == arc.to; });
  }
  /// Declaration position of an action, used for deterministic tie-breaks.
  std::size_t action_position(std::string_view id) const { return action_index_.at(std::string(id)); }

  std::map<std::string, Type> variable_types() const {
    std::map<std::string, Type> out;
    for (const auto& v : variables_) out[v.name] = v.type;
    return out;
  }

  friend bool operator==(const StaticModel& a, const StaticModel& b) {
    return a.thimacs_ == b.thimacs_ && a.actions_ == b.actions_ && a.flows_ == b.flows_ &&
           a.triggers_ == b.triggers_ && a.variables_ == b.variables_ && a.simplified_ == b.simplified_;
  }

 private:
  friend Result<StaticModel> assemble(const ModelDecl& decl);
  friend Result<StaticModel> build_model(const ModelDecl& decl);
  friend Result<StaticModel> simplify(const StaticModel& model);

  void reindex() {
    action_index_.clear();
    for (std::size_t i = 0; i < actions_.size(); ++i) action_index_[actions_[i].id] = i;
  }

  std::vector<Thimac> thimacs_;
  std::vector<Action> actions_;
  std::vector<FlowArc> flows_;
  std::vector<TriggerArc> triggers_;
  std::vector<VarDecl> variables_;
  std::map<std::string, std::size_t> action_index_;
  bool validated_ = false;
  bool simplified_ = false;
};

/// Resolves names and checks structure: DuplicateId, UnknownReference,
/// CyclicContainment. Adjacency and reachability are left to validate().
inline Result<StaticModel> assemble(const ModelDecl& decl) {
  Diagnostics errors;
  StaticModel m;

  std::set<std::string> var_names;
  for (const auto& v : decl.variables) {
    if (!var_names.insert(v.name).second) {
      errors.push_back({"DuplicateId", "variable '" + v.name + "' declared twice", v.span, v.name});
      continue;
    }
    if (v.initial && type_of(*v.initial) != v.type)
      errors.push_back({"GuardTypeError", "initial value of '" + v.name + "' is not " + to_string(v.type), v.span,
                        v.name});
    if (v.domain && v.type != Type::Int)
      errors.push_back({"GuardTypeError", "domain given for non-int variable '" + v.name + "'", v.span, v.name});
    if (v.domain && v.domain->first > v.domain->second)
      errors.push_back({"GuardTypeError", "empty domain for '" + v.name + "'", v.span, v.name});
    m.variables_.push_back(v);
  }

  std::map<std::string, const ThimacDecl*> by_name;
  for (const auto& t : decl.thimacs) {
    if (!by_name.emplace(t.name, &t).second) {
      errors.push_back({"DuplicateId", "thimac '" + t.name + "' declared twice", t.span, t.name});
      continue;
    }
    Thimac th{t.name, t.parent, {}, t.note, t.span};
    for (const auto& a : t.actions) {
      std::string id = action_id(t.name, a.local_name());
      if (m.action_index_.count(id)) {
        errors.push_back({"DuplicateId", "action '" + id + "' declared twice", a.span, id});
        continue;
      }
      m.action_index_[id] = m.actions_.size();
      m.actions_.push_back({id, a.kind, t.name, a.entity, a.span});
      th.actions.push_back(id);
    }
    m.thimacs_.push_back(std::move(th));
  }

  for (const auto& t : decl.thimacs) {
    if (t.parent && !by_name.count(*t.parent))
      errors.push_back({"UnknownReference", "parent thimac '" + *t.parent + "' of '" + t.name + "' is not declared",
                        t.span, *t.parent});
  }
  // Parent links must form a forest: walking up from any thimac terminates.
  std::set<std::string> reported;
  for (const auto& t : decl.thimacs) {
    std::set<std::string> seen{t.name};
    const ThimacDecl* cur = &t;
    while (cur->parent) {
      auto it = by_name.find(*cur->parent);
      if (it == by_name.end()) break;
      if (!seen.insert(it->first).second) {
        if (reported.insert(t.name).second)
          errors.push_back({"CyclicContainment", "thimac '" + t.name + "' is contained in itself", t.span, t.name});
        break;
      }
      cur = it->second;
    }
  }

  auto check_endpoint = [&](const std::string& id, const SourceSpan& span) {
    if (!m.action_index_.count(id)) {
      errors.push_back({"UnknownReference", "action '" + id + "' is not declared", span, id});
      return false;
    }
    return true;
  };

  std::set<std::pair<std::string, std::string>> seen_flows;
  for (const auto& f : decl.flows) {
    bool ok = check_endpoint(f.from, f.span);
    ok = check_endpoint(f.to, f.span) && ok;
    if (!ok) continue;
    if (!seen_flows.emplace(f.from, f.to).second) {
      errors.push_back({"DuplicateId", "flow arc " + f.from + " -> " + f.to + " declared twice", f.span,
                        f.from + " -> " + f.to});
      continue;
    }
    m.flows_.push_back({f.from, f.to, f.label, false, f.span});
  }
  std::set<std::pair<std::string, std::string>> seen_triggers;
  for (const auto& t : decl.triggers) {
    bool ok = check_endpoint(t.from, t.span);
    ok = check_endpoint(t.to, t.span) && ok;
    if (!ok) continue;
    if (!seen_triggers.emplace(t.from, t.to).second) {
      errors.push_back({"DuplicateId", "trigger arc " + t.from + " => " + t.to + " declared twice", t.span,
                        t.from + " => " + t.to});
      continue;
    }
    m.triggers_.push_back({t.from, t.to, t.span});
  }

  if (!errors.empty()) return errors;
  return m;
}

/// Checks adjacency, boundary, trigger-target and reachability rules. Every
/// violation is reported. A simplified model is checked against the relaxed
/// rules that admit contracted arcs.
inline ValidationReport validate(const StaticModel& model) {
  ValidationReport report;
  const bool relaxed = model.simplified();

  for (const auto& f : model.flows()) {
    const Action* from = model.find_action(f.from);
    const Action* to = model.find_action(f.to);
    const std::string subject = f.from + " -> " + f.to;
    if (!from || !to) {
      report.push_back({"UnknownReference", "flow arc endpoint is not declared", f.span, subject});
      continue;
    }
    if (f.contracted) {
      if (!relaxed || is_plumbing(from->kind) || is_plumbing(to->kind))
        report.push_back({"IllegalAdjacency", std::string("contracted flow ") + to_string(from->kind) + " -> " +
                                                  to_string(to->kind) + " is not allowed here",
                          f.span, subject});
      continue;
    }
    if (!flow_permitted(from->kind, to->kind)) {
      report.push_back({"IllegalAdjacency",
                        std::string("flow ") + to_string(from->kind) + " -> " + to_string(to->kind) + " is not permitted",
                        f.span, subject});
      continue;
    }
    const bool crossing = from->owner != to->owner;
    const bool transfer = from->kind == ActionKind::TransferOut && to->kind == ActionKind::TransferIn;
    if (transfer && !crossing)
      report.push_back({"IllegalBoundaryCrossing", "transfer out -> transfer in must connect different thimacs",
                        f.span, subject});
    else if (!transfer && crossing)
      report.push_back({"IllegalBoundaryCrossing",
                        "flow from " + from->owner + " to " + to->owner + " must pass through transfer", f.span,
                        subject});
  }

  for (const auto& t : model.triggers()) {
    const Action* to = model.find_action(t.to);
    const std::string subject = t.from + " => " + t.to;
    if (!model.find_action(t.from) || !to) {
      report.push_back({"UnknownReference", "trigger arc endpoint is not declared", t.span, subject});
      continue;
    }
    if (!trigger_target_permitted(to->kind))
      report.push_back({"IllegalAdjacency",
                        std::string("trigger may not target ") + to_string(to->kind), t.span, subject});
  }

  // Reachability from the roots along flow and trigger arcs.
  std::map<std::string, std::vector<std::string>> succ;
  std::map<std::string, int> indegree;
  for (const auto& f : model.flows()) {
    succ[f.from].push_back(f.to);
    ++indegree[f.to];
  }
  for (const auto& t : model.triggers()) {
    succ[t.from].push_back(t.to);
    ++indegree[t.to];
  }
  std::set<std::string> reached;
  std::deque<std::string> work;
  for (const auto& a : model.actions()) {
    const bool root = a.kind == ActionKind::Create || a.kind == ActionKind::TransferIn ||
                      (relaxed && indegree[a.id] == 0);
    if (root && reached.insert(a.id).second) work.push_back(a.id);
  }
  while (!work.empty()) {
    std::string cur = work.front();
    work.pop_front();
    for (const auto& n : succ[cur])
      if (reached.insert(n).second) work.push_back(n);
  }
  for (const auto& a : model.actions())
    if (!reached.count(a.id))
      report.push_back({"OrphanAction", "action '" + a.id + "' is not reachable from any create or transfer in",
                        a.span, a.id});

  return report;
}

/// assemble() followed by validate(); the result is marked validated.
inline Result<StaticModel> build_model(const ModelDecl& decl) {
  auto assembled = assemble(decl);
  if (!assembled) return assembled.errors();
  StaticModel m = std::move(assembled).value();
  auto report = validate(m);
  if (!report.empty()) return report;
  m.validated_ = true;
  return m;
}

/// Contracts every release/transfer/transfer/receive chain into a direct
/// flow arc between the surrounding create/process actions.
inline Result<StaticModel> simplify(const StaticModel& model) {
  if (!model.validated())
    return Diagnostic{"NotValidated", "simplify requires a validated model", {}, ""};

  auto kind_of = [&](const std::string& id) { return model.find_action(id)->kind; };
  std::map<std::string, std::vector<const FlowArc*>> out_flows;
  std::map<std::string, std::vector<const FlowArc*>> in_flows;
  for (const auto& f : model.flows()) {
    out_flows[f.from].push_back(&f);
    in_flows[f.to].push_back(&f);
  }

  StaticModel s;
  s.variables_ = model.variables_;
  std::set<std::pair<std::string, std::string>> have;

  for (const auto& f : model.flows()) {
    if (is_plumbing(kind_of(f.from)) || is_plumbing(kind_of(f.to))) continue;
    s.flows_.push_back(f);
    have.emplace(f.from, f.to);
  }
  for (const auto& a : model.actions()) {
    if (is_plumbing(a.kind)) continue;
    for (const FlowArc* first : out_flows[a.id]) {
      if (!is_plumbing(kind_of(first->to))) continue;
      std::set<std::string> visited;
      std::vector<std::string> stack{first->to};
      std::vector<std::string> targets;
      while (!stack.empty()) {
        std::string cur = stack.back();
        stack.pop_back();
        if (!visited.insert(cur).second) continue;
        for (const FlowArc* next : out_flows[cur]) {
          if (is_plumbing(kind_of(next->to)))
            stack.push_back(next->to);
          else
            targets.push_back(next->to);
        }
      }
      for (const auto& t : targets) {
        if (!have.emplace(a.id, t).second) continue;
        s.flows_.push_back({a.id, t, first->label, true, first->span});
      }
    }
  }

  // A trigger fired from plumbing moves to the nearest upstream create/process.
  std::set<std::pair<std::string, std::string>> have_trig;
  for (const auto& t : model.triggers()) {
    std::vector<std::string> sources;
    if (!is_plumbing(kind_of(t.from))) {
      sources.push_back(t.from);
    } else {
      std::set<std::string> visited;
      std::vector<std::string> stack{t.from};
      while (!stack.empty()) {
        std::string cur = stack.back();
        stack.pop_back();
        if (!visited.insert(cur).second) continue;
        for (const FlowArc* prev : in_flows[cur]) {
          if (is_plumbing(kind_of(prev->from)))
            stack.push_back(prev->from);
          else
            sources.push_back(prev->from);
        }
      }
      std::sort(sources.begin(), sources.end(), [&](const std::string& x, const std::string& y) {
        return model.action_position(x) < model.action_position(y);
      });
    }
    for (const auto& src : sources)
      if (have_trig.emplace(src, t.to).second) s.triggers_.push_back({src, t.to, t.span});
  }

  for (const auto& a : model.actions())
    if (!is_plumbing(a.kind)) s.actions_.push_back(a);
  for (const auto& t : model.thimacs()) {
    Thimac copy = t;
    copy.actions.erase(std::remove_if(copy.actions.begin(), copy.actions.end(),
                                      [&](const std::string& id) { return is_plumbing(kind_of(id)); }),
                       copy.actions.end());
    s.thimacs_.push_back(std::move(copy));
  }
  s.reindex();
  s.simplified_ = true;
  auto report = validate(s);
  if (!report.empty()) return report;
  s.validated_ = true;
  return s;
}

/// Directed reachability between create/process actions along flow arcs,
/// passing through any intermediate actions.
inline std::set<std::pair<std::string, std::string>> flow_connected_pairs(const StaticModel& model) {
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& f : model.flows()) succ[f.from].push_back(f.to);
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& a : model.actions()) {
    if (is_plumbing(a.kind)) continue;
    std::set<std::string> seen;
    std::vector<std::string> stack(succ[a.id].begin(), succ[a.id].end());
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      if (!seen.insert(cur).second) continue;
      if (!is_plumbing(model.find_action(cur)->kind)) out.emplace(a.id, cur);
      for (const auto& n : succ[cur]) stack.push_back(n);
    }
  }
  return out;
}

}  // namespace occ
