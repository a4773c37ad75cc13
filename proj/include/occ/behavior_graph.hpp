#pragma once

// Behavior model: events joined by guarded sequence edges and negative
// (revert) edges.

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "occ/diagnostics.hpp"
#include "occ/event_model.hpp"
#include "occ/expr.hpp"
#include "occ/static_model.hpp"

namespace occ {

enum class EdgeKind { Sequence, Negative };

struct BehaviorEdge {
  std::string from;
  std::string to;
  EdgeKind kind = EdgeKind::Sequence;
  ExprPtr guard;  // Sequence only
  SourceSpan span;
};

class BehaviorGraph;
Result<BehaviorGraph> build_behavior(std::shared_ptr<const StaticModel> model, std::vector<Event> events,
                                     std::vector<BehaviorEdge> edges);

/// Validated behavior graph. Immutable after build_behavior().
class BehaviorGraph {
 public:
  const StaticModel& model() const { return *model_; }
  std::shared_ptr<const StaticModel> model_ptr() const { return model_; }
  const std::vector<Event>& events() const { return events_; }
  const std::vector<BehaviorEdge>& edges() const { return edges_; }
  const std::vector<std::string>& initial() const { return initial_; }
  /// Non-fatal findings, e.g. UnguardedBranch.
  const Diagnostics& warnings() const { return warnings_; }

  const Event* find_event(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &events_[it->second];
  }
  std::size_t position(std::string_view id) const { return index_.at(std::string(id)); }
  bool is_initial(std::string_view id) const {
    return std::find(initial_.begin(), initial_.end(), id) != initial_.end();
  }

  /// Edge indices by endpoint.
  const std::vector<std::size_t>& outgoing(std::size_t event) const { return out_[event]; }
  const std::vector<std::size_t>& incoming(std::size_t event) const { return in_[event]; }

 private:
  friend Result<BehaviorGraph> build_behavior(std::shared_ptr<const StaticModel>, std::vector<Event>,
                                              std::vector<BehaviorEdge>);

  std::shared_ptr<const StaticModel> model_;
  std::vector<Event> events_;
  std::vector<BehaviorEdge> edges_;
  std::vector<std::string> initial_;
  Diagnostics warnings_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

namespace detail {

inline void collect_literals(const ExprPtr& e, std::set<std::int64_t>& ints, std::set<std::string>& texts) {
  if (!e) return;
  if (e->kind == Expr::Kind::Literal) {
    if (auto i = std::get_if<std::int64_t>(&e->literal)) ints.insert(*i);
    if (auto s = std::get_if<std::string>(&e->literal)) texts.insert(*s);
  }
  collect_literals(e->lhs, ints, texts);
  collect_literals(e->rhs, ints, texts);
}

/// Searches a small probe grid for an environment satisfying both guards.
/// The grid covers each variable's declared domain (when small) or the
/// neighbourhood of every literal in the guards.
inline bool guards_may_overlap(const ExprPtr& a, const ExprPtr& b, const StaticModel& model) {
  std::set<std::string> vars = variables_of(a);
  for (const auto& v : variables_of(b)) vars.insert(v);
  std::set<std::int64_t> ints{-1, 0, 1};
  std::set<std::string> texts{""};
  collect_literals(a, ints, texts);
  collect_literals(b, ints, texts);
  std::set<std::int64_t> probe;
  for (auto c : ints) {
    probe.insert(c - 1);
    probe.insert(c);
    probe.insert(c + 1);
  }

  std::vector<std::string> names(vars.begin(), vars.end());
  std::vector<std::vector<Value>> choices;
  for (const auto& n : names) {
    const VarDecl* v = model.find_variable(n);
    std::vector<Value> vals;
    if (!v) return true;
    if (v->type == Type::Bool) {
      vals = {false, true};
    } else if (v->type == Type::Text) {
      for (const auto& t : texts) vals.emplace_back(t);
      vals.emplace_back(std::string("\x01"));
    } else if (v->domain && v->domain->second - v->domain->first < 64) {
      for (auto x = v->domain->first; x <= v->domain->second; ++x) vals.emplace_back(x);
    } else {
      for (auto x : probe) {
        if (v->domain && (x < v->domain->first || x > v->domain->second)) continue;
        vals.emplace_back(x);
      }
      if (v->domain) {
        vals.emplace_back(v->domain->first);
        vals.emplace_back(v->domain->second);
      }
    }
    choices.push_back(std::move(vals));
  }

  std::size_t total = 1;
  for (const auto& c : choices) {
    total *= std::max<std::size_t>(c.size(), 1);
    if (total > 200000) return true;  // too large to decide; assume overlap
  }
  std::vector<std::size_t> pick(names.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Env env;
    std::size_t rest = n;
    for (std::size_t i = 0; i < names.size(); ++i) {
      env[names[i]] = choices[i][rest % choices[i].size()];
      rest /= choices[i].size();
    }
    if (evaluate_guard(a, env) && evaluate_guard(b, env)) return true;
  }
  return false;
}

}  // namespace detail

/// Validates events and edges over `model`. Errors: DuplicateId, UnknownEvent,
/// UnknownId, GuardTypeError, UndeclaredVariable, GuardedNegativeEdge.
/// Non-exclusive sibling guards produce an UnguardedBranch warning.
inline Result<BehaviorGraph> build_behavior(std::shared_ptr<const StaticModel> model, std::vector<Event> events,
                                            std::vector<BehaviorEdge> edges) {
  Diagnostics errors;
  if (!model || !model->validated())
    return Diagnostic{"NotValidated", "behavior requires a validated static model", {}, ""};

  BehaviorGraph g;
  g.model_ = model;
  for (auto& e : events) {
    if (g.index_.count(e.id)) {
      errors.push_back({"DuplicateId", "event '" + e.id + "' defined twice", e.span, e.id});
      continue;
    }
    for (const auto& a : e.region.actions)
      if (!model->find_action(a))
        errors.push_back({"UnknownId", "event '" + e.id + "' uses unknown action '" + a + "'", e.span, a});
    for (const auto& arc : e.region.arcs)
      if (!model->has_arc(arc))
        errors.push_back({"UnknownId", "event '" + e.id + "' uses unknown arc " + to_string(arc), e.span,
                          to_string(arc)});
    if (e.status != EventStatus::Subsisting || e.time)
      errors.push_back({"ActualizedInStaticModel", "event '" + e.id + "' must be subsisting", e.span, e.id});
    g.index_[e.id] = g.events_.size();
    g.events_.push_back(std::move(e));
  }

  const auto types = model->variable_types();
  for (auto& edge : edges) {
    bool ok = true;
    for (const auto* end : {&edge.from, &edge.to})
      if (!g.index_.count(*end)) {
        errors.push_back({"UnknownEvent", "edge refers to undefined event '" + *end + "'", edge.span, *end});
        ok = false;
      }
    if (edge.kind == EdgeKind::Negative && edge.guard) {
      errors.push_back({"GuardedNegativeEdge", "negative edge " + edge.from + " -> " + edge.to + " has a guard",
                        edge.span, edge.from});
      ok = false;
    }
    if (edge.guard) {
      auto t = typecheck(edge.guard, types, "GuardTypeError");
      if (!t) {
        for (auto d : t.errors()) {
          d.span = edge.span;
          errors.push_back(std::move(d));
        }
        ok = false;
      } else if (t.value() != Type::Bool) {
        errors.push_back({"GuardTypeError", "guard on " + edge.from + " -> " + edge.to + " is not boolean",
                          edge.span, edge.from});
        ok = false;
      }
    }
    if (ok) g.edges_.push_back(std::move(edge));
  }
  if (!errors.empty()) return errors;

  g.out_.assign(g.events_.size(), {});
  g.in_.assign(g.events_.size(), {});
  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    g.out_[g.index_[g.edges_[i].from]].push_back(i);
    g.in_[g.index_[g.edges_[i].to]].push_back(i);
  }
  for (std::size_t i = 0; i < g.events_.size(); ++i) {
    bool has_seq_in = std::any_of(g.in_[i].begin(), g.in_[i].end(),
                                  [&](std::size_t k) { return g.edges_[k].kind == EdgeKind::Sequence; });
    if (!has_seq_in) g.initial_.push_back(g.events_[i].id);
  }

  // Sibling branches into non-external events should be mutually exclusive.
  for (std::size_t i = 0; i < g.events_.size(); ++i) {
    std::vector<const BehaviorEdge*> branches;
    for (auto k : g.out_[i]) {
      const auto& e = g.edges_[k];
      if (e.kind == EdgeKind::Sequence && !g.events_[g.index_[e.to]].external) branches.push_back(&e);
    }
    for (std::size_t a = 0; a < branches.size(); ++a)
      for (std::size_t b = a + 1; b < branches.size(); ++b) {
        const auto* x = branches[a];
        const auto* y = branches[b];
        bool overlap = !x->guard || !y->guard || detail::guards_may_overlap(x->guard, y->guard, *model);
        if (overlap)
          g.warnings_.push_back({"UnguardedBranch",
                                 "branches " + x->from + " -> " + x->to + " and " + y->from + " -> " + y->to +
                                     " are not mutually exclusive",
                                 y->span, x->from, true});
      }
  }
  return g;
}

inline Result<NegativeEventRef> negate(const BehaviorGraph& bg, std::string_view id) {
  return negate(std::span<const Event>(bg.events()), id);
}

}  // namespace occ
