#pragma once

#include <algorithm>
#include <set>
#include <tuple>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "occ/dsl/document.hpp"
#include "occ/dsl/parser.hpp"

namespace occ::dsl {

namespace detail {

inline bool bare_word(const std::string& s) {
  if (s.empty() || !is_ident_start(s[0])) return false;
  for (char c : s)
    if (!is_ident_char(c)) return false;
  return !thimac_words().count(s);
}

inline void write_thimac(std::ostringstream& out, const std::vector<ThimacDecl>& all, const ThimacDecl& t,
                         int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  out << pad << "thimac " << t.name << " {\n";
  if (!t.note.empty()) out << pad << "  note " << quote_text(t.note) << "\n";
  for (const auto& a : t.actions) {
    out << pad << "  ";
    switch (a.kind) {
      case ActionKind::TransferIn: out << "transfer in"; break;
      case ActionKind::TransferOut: out << "transfer out"; break;
      default: out << to_string(a.kind);
    }
    if (!a.entity.empty()) out << " " << (bare_word(a.entity) ? a.entity : quote_text(a.entity));
    if (!a.name.empty() && a.name != to_string(a.kind)) out << " as " << a.name;
    out << "\n";
  }
  for (const auto& child : all)
    if (child.parent == t.name) write_thimac(out, all, child, depth + 1);
  out << pad << "}\n";
}

inline std::string region_text(const EventDecl& e) {
  std::vector<std::string> parts;
  for (const auto& a : e.arcs) parts.push_back(a.from + (a.kind == ArcKind::Flow ? " -> " : " => ") + a.to);
  for (const auto& a : e.actions) parts.push_back(a);
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
  return out.empty() ? "{ }" : "{ " + out + " }";
}

}  // namespace detail

/// Canonical text form. Re-parsing the output yields a structurally equal
/// document, and serializing that again reproduces the same bytes.
inline std::string serialize(const Document& doc) {
  std::ostringstream out;
  bool section = false;
  auto gap = [&] {
    if (section) out << "\n";
    section = true;
  };

  if (!doc.model.variables.empty()) {
    gap();
    for (const auto& v : doc.model.variables) {
      out << "var " << v.name << ": " << to_string(v.type);
      if (v.initial) out << " = " << to_string(*v.initial);
      if (v.domain) out << " in " << v.domain->first << ".." << v.domain->second;
      out << "\n";
    }
  }

  std::set<std::string> names;
  for (const auto& t : doc.model.thimacs) names.insert(t.name);
  for (const auto& t : doc.model.thimacs) {
    if (t.parent && names.count(*t.parent)) continue;
    gap();
    detail::write_thimac(out, doc.model.thimacs, t, 0);
  }

  auto sorted = [](std::vector<ArcDecl> arcs) {
    std::stable_sort(arcs.begin(), arcs.end(), [](const ArcDecl& a, const ArcDecl& b) {
      return std::tie(a.from, a.to, a.label) < std::tie(b.from, b.to, b.label);
    });
    return arcs;
  };
  if (!doc.model.flows.empty()) {
    gap();
    for (const auto& f : sorted(doc.model.flows)) {
      out << "flow ";
      if (!f.label.empty()) out << f.label << ": ";
      out << f.from << " -> " << f.to << "\n";
    }
  }
  if (!doc.model.triggers.empty()) {
    gap();
    for (const auto& t : sorted(doc.model.triggers)) out << "trigger " << t.from << " -> " << t.to << "\n";
  }
  if (!doc.queues.empty()) {
    gap();
    for (const auto& q : doc.queues) out << "queue " << q.name << "\n";
  }

  if (!doc.events.empty()) {
    gap();
    for (const auto& e : doc.events) {
      out << "event " << e.id;
      if (!e.label.empty()) out << " " << quote_text(e.label);
      out << " = region " << detail::region_text(e) << "\n";
      if (!e.effects.empty()) {
        out << "  effect ";
        for (std::size_t i = 0; i < e.effects.size(); ++i) out << (i ? ", " : "") << to_string(e.effects[i]);
        out << "\n";
      }
      if (e.guard) out << "  guard " << to_string(e.guard) << "\n";
      if (e.external) out << "  external\n";
      if (!e.note.empty()) out << "  note " << quote_text(e.note) << "\n";
    }
  }

  if (!doc.edges.empty()) {
    gap();
    for (const auto& e : doc.edges) {
      if (e.kind == EdgeKind::Negative)
        out << "negedge " << e.from << " -> revert " << e.to;
      else
        out << "edge " << e.from << " -> " << e.to;
      if (e.guard) out << " guard " << to_string(e.guard);
      out << "\n";
    }
  }

  for (const auto& s : doc.scenarios) {
    gap();
    out << "scenario " << (detail::bare_word(s.name) ? s.name : quote_text(s.name)) << " {\n";
    for (const auto& [var, value] : s.bindings) out << "  bind " << var << " = " << to_string(value) << "\n";
    for (const auto& st : s.stimuli) out << "  stimulus " << st.event << " at " << st.at << "\n";
    out << "}\n";
  }

  for (const auto& tl : doc.timelines) {
    gap();
    out << "timeline " << tl.name << " {\n";
    for (const auto& e : tl.events) {
      out << "  event " << e.id << ": " << to_string(e.category);
      if (!e.label.empty()) out << " " << quote_text(e.label);
      switch (e.anchor.kind) {
        case TimeAnchor::Kind::Instant: out << " at " << e.anchor.start.text; break;
        case TimeAnchor::Kind::Interval: out << " from " << e.anchor.start.text << " to " << e.anchor.end.text; break;
        case TimeAnchor::Kind::After: out << " after " << e.anchor.start.text; break;
        case TimeAnchor::Kind::Unknown: out << " unknown"; break;
      }
      out << "\n";
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace occ::dsl
