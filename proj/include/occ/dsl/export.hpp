#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "occ/dsl/document.hpp"

namespace occ::dsl {

enum class DotLevel { Static, Behavior };

inline Result<DotLevel> parse_dot_level(std::string_view s) {
  if (s == "static") return DotLevel::Static;
  if (s == "behavior") return DotLevel::Behavior;
  return Diagnostic{"UnsupportedLevel", "unsupported level '" + std::string(s) + "' (use static or behavior)", {},
                    std::string(s)};
}

namespace detail {

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\')
      out += '\\', out += c;
    else if (c == '\n')
      out += "\\n";
    else
      out += c;
  }
  return out + '"';
}

inline void dot_cluster(std::ostringstream& out, const Document& doc, const ThimacDecl& t, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  out << pad << "subgraph " << dot_quote("cluster_" + t.name) << " {\n";
  out << pad << "  label=" << dot_quote(t.name) << ";\n";
  for (const auto& a : t.actions) {
    std::string label = to_string(a.kind);
    if (!a.entity.empty()) label += "\n" + a.entity;
    out << pad << "  " << dot_quote(action_id(t.name, a.local_name())) << " [label=" << dot_quote(label) << "];\n";
  }
  for (const auto& c : doc.model.thimacs)
    if (c.parent == t.name) dot_cluster(out, doc, c, depth + 1);
  out << pad << "}\n";
}

inline std::vector<ArcDecl> sorted_arcs(std::vector<ArcDecl> arcs) {
  std::stable_sort(arcs.begin(), arcs.end(), [](const ArcDecl& a, const ArcDecl& b) {
    return std::tie(a.from, a.to, a.label) < std::tie(b.from, b.to, b.label);
  });
  return arcs;
}

}  // namespace detail

/// Graphviz rendering. The static level draws thimacs as clusters with one
/// node per action; the behavior level draws events and their edges.
inline std::string export_dot(const Document& doc, DotLevel level) {
  std::ostringstream out;
  if (level == DotLevel::Static) {
    out << "digraph static {\n";
    std::set<std::string> names;
    for (const auto& t : doc.model.thimacs) names.insert(t.name);
    for (const auto& t : doc.model.thimacs)
      if (!t.parent || !names.count(*t.parent)) detail::dot_cluster(out, doc, t, 1);
    for (const auto& f : detail::sorted_arcs(doc.model.flows)) {
      out << "  " << detail::dot_quote(f.from) << " -> " << detail::dot_quote(f.to);
      if (!f.label.empty()) out << " [label=" << detail::dot_quote(f.label) << "]";
      out << ";\n";
    }
    for (const auto& t : detail::sorted_arcs(doc.model.triggers))
      out << "  " << detail::dot_quote(t.from) << " -> " << detail::dot_quote(t.to) << " [style=dashed];\n";
    out << "}\n";
    return out.str();
  }

  out << "digraph behavior {\n";
  for (const auto& e : doc.events) {
    std::string label = e.id;
    if (!e.label.empty()) label += "\n" + e.label;
    out << "  " << detail::dot_quote(e.id) << " [shape=box, label=" << detail::dot_quote(label);
    if (e.external) out << ", peripheries=2";
    out << "];\n";
  }
  for (const auto& e : doc.edges) {
    out << "  " << detail::dot_quote(e.from) << " -> " << detail::dot_quote(e.to);
    if (e.kind == EdgeKind::Negative)
      out << " [dir=both, arrowtail=diamond, style=bold]";
    else if (e.guard)
      out << " [label=" << detail::dot_quote(to_string(e.guard)) << "]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

inline Result<std::string> export_dot(const Document& doc, std::string_view level) {
  auto l = parse_dot_level(level);
  if (!l) return l.errors();
  return export_dot(doc, l.value());
}

namespace detail {

inline nlohmann::ordered_json arcs_json(const std::vector<ArcDecl>& arcs, bool with_label) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& a : sorted_arcs(arcs)) {
    nlohmann::ordered_json j;
    j["from"] = a.from;
    j["to"] = a.to;
    if (with_label) j["label"] = a.label;
    out.push_back(j);
  }
  return out;
}

inline nlohmann::ordered_json expr_json(const ExprPtr& e) {
  return e ? nlohmann::ordered_json(to_string(e)) : nlohmann::ordered_json(nullptr);
}

}  // namespace detail

/// The document as JSON, field for field, with arrays ordered as serialize()
/// orders them.
inline nlohmann::ordered_json export_json(const Document& doc) {
  using J = nlohmann::ordered_json;
  J root;
  root["tm_version"] = 1;

  J vars = J::array();
  for (const auto& v : doc.model.variables) {
    J j;
    j["name"] = v.name;
    j["type"] = to_string(v.type);
    j["initial"] = v.initial ? to_json(*v.initial) : J(nullptr);
    j["domain"] = v.domain ? J::array({v.domain->first, v.domain->second}) : J(nullptr);
    vars.push_back(j);
  }
  root["variables"] = vars;

  J thimacs = J::array();
  for (const auto& t : doc.model.thimacs) {
    J j;
    j["name"] = t.name;
    j["parent"] = t.parent ? J(*t.parent) : J(nullptr);
    j["note"] = t.note;
    J actions = J::array();
    for (const auto& a : t.actions) {
      J aj;
      aj["id"] = action_id(t.name, a.local_name());
      aj["kind"] = to_string(a.kind);
      aj["entity"] = a.entity;
      actions.push_back(aj);
    }
    j["actions"] = actions;
    thimacs.push_back(j);
  }
  root["thimacs"] = thimacs;
  root["flows"] = detail::arcs_json(doc.model.flows, true);
  root["triggers"] = detail::arcs_json(doc.model.triggers, false);

  J queues = J::array();
  for (const auto& q : doc.queues) queues.push_back(q.name);
  root["queues"] = queues;

  J events = J::array();
  for (const auto& e : doc.events) {
    J j;
    j["id"] = e.id;
    j["label"] = e.label;
    J arcs = J::array();
    for (const auto& a : e.arcs)
      arcs.push_back(J{{"kind", a.kind == ArcKind::Flow ? "flow" : "trigger"}, {"from", a.from}, {"to", a.to}});
    j["arcs"] = arcs;
    j["actions"] = e.actions;
    J effects = J::array();
    for (const auto& eff : e.effects) effects.push_back(J{{"target", eff.target}, {"value", to_string(eff.value)}});
    j["effects"] = effects;
    j["guard"] = detail::expr_json(e.guard);
    j["external"] = e.external;
    j["note"] = e.note;
    events.push_back(j);
  }
  root["events"] = events;

  J edges = J::array();
  for (const auto& e : doc.edges)
    edges.push_back(J{{"from", e.from},
                      {"to", e.to},
                      {"kind", e.kind == EdgeKind::Sequence ? "sequence" : "negative"},
                      {"guard", detail::expr_json(e.guard)}});
  root["edges"] = edges;

  J scenarios = J::array();
  for (const auto& s : doc.scenarios) {
    J bindings = J::array();
    for (const auto& [var, value] : s.bindings) bindings.push_back(J{{"var", var}, {"value", to_json(value)}});
    J stimuli = J::array();
    for (const auto& st : s.stimuli) stimuli.push_back(J{{"event", st.event}, {"at", st.at}});
    scenarios.push_back(J{{"name", s.name}, {"bindings", bindings}, {"stimuli", stimuli}});
  }
  root["scenarios"] = scenarios;

  J timelines = J::array();
  for (const auto& tl : doc.timelines) {
    J evs = J::array();
    for (const auto& e : tl.events) evs.push_back(to_json(e));
    timelines.push_back(J{{"name", tl.name}, {"events", evs}});
  }
  root["timelines"] = timelines;
  return root;
}

}  // namespace occ::dsl
