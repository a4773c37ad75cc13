#pragma once

// Clinical timelines: events anchored at instants or intervals (possibly
// under-specified), a temporal relation algebra over them, and the small
// query language used to interrogate a timeline.

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "occ/diagnostics.hpp"

namespace occ {

/// A calendar date or date-time, compared at one-second resolution (UTC).
/// The original spelling is kept for verbatim output.
struct TimePoint {
  std::int64_t seconds = 0;
  std::string text;

  friend bool operator==(const TimePoint& a, const TimePoint& b) { return a.seconds == b.seconds; }
  friend auto operator<=>(const TimePoint& a, const TimePoint& b) { return a.seconds <=> b.seconds; }
};

/// Parses YYYY-MM-DD, YYYY-MM-DDTHH:MM or YYYY-MM-DDTHH:MM:SS.
inline std::optional<TimePoint> parse_time(std::string_view s) {
  auto digits = [&](std::size_t pos, std::size_t n) -> std::optional<int> {
    if (pos + n > s.size()) return std::nullopt;
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  if (s.size() != 10 && s.size() != 16 && s.size() != 19) return std::nullopt;
  auto y = digits(0, 4), mo = digits(5, 2), d = digits(8, 2);
  if (!y || !mo || !d || s[4] != '-' || s[7] != '-') return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*mo)},
                                  std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  int hh = 0, mm = 0, ss = 0;
  if (s.size() >= 16) {
    auto h = digits(11, 2), m = digits(14, 2);
    if (s[10] != 'T' || s[13] != ':' || !h || !m || *h > 23 || *m > 59) return std::nullopt;
    hh = *h;
    mm = *m;
  }
  if (s.size() == 19) {
    auto sec = digits(17, 2);
    if (s[16] != ':' || !sec || *sec > 59) return std::nullopt;
    ss = *sec;
  }
  const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
  return TimePoint{static_cast<std::int64_t>(days) * 86400 + hh * 3600 + mm * 60 + ss, std::string(s)};
}

inline TimePoint time_point(std::string_view s) {
  auto t = parse_time(s);
  if (!t) throw Error("InvalidTime", "not an ISO-8601 date or date-time: '" + std::string(s) + "'");
  return *t;
}

struct TimeAnchor {
  enum class Kind { Instant, Interval, After, Unknown };
  Kind kind = Kind::Unknown;
  TimePoint start;  // Instant, Interval, After
  TimePoint end;    // Instant (== start), Interval

  static TimeAnchor instant(TimePoint t) { return {Kind::Instant, t, t}; }
  static TimeAnchor interval(TimePoint s, TimePoint e) { return {Kind::Interval, std::move(s), std::move(e)}; }
  static TimeAnchor after(TimePoint t) { return {Kind::After, std::move(t), {}}; }
  static TimeAnchor unknown() { return {}; }

  std::optional<std::int64_t> start_seconds() const {
    if (kind == Kind::Unknown) return std::nullopt;
    return start.seconds;
  }
  std::optional<std::int64_t> end_seconds() const {
    if (kind == Kind::Instant || kind == Kind::Interval) return end.seconds;
    return std::nullopt;
  }

  friend bool operator==(const TimeAnchor& a, const TimeAnchor& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::Instant:
      case Kind::After: return a.start == b.start && a.start.text == b.start.text;
      case Kind::Interval:
        return a.start == b.start && a.end == b.end && a.start.text == b.start.text && a.end.text == b.end.text;
      case Kind::Unknown: return true;
    }
    return false;
  }
};

inline std::string to_string(const TimeAnchor& a) {
  switch (a.kind) {
    case TimeAnchor::Kind::Instant: return "instant " + a.start.text;
    case TimeAnchor::Kind::Interval: return "interval " + a.start.text + " " + a.end.text;
    case TimeAnchor::Kind::After: return "after " + a.start.text;
    case TimeAnchor::Kind::Unknown: return "unknown";
  }
  return "?";
}

enum class Category { Admission, Medication, LabResult, Diagnosis, Procedure, Other };

inline const char* to_string(Category c) {
  switch (c) {
    case Category::Admission: return "admission";
    case Category::Medication: return "medication";
    case Category::LabResult: return "lab_result";
    case Category::Diagnosis: return "diagnosis";
    case Category::Procedure: return "procedure";
    case Category::Other: return "other";
  }
  return "?";
}

inline std::optional<Category> category_from(std::string_view s) {
  for (auto c : {Category::Admission, Category::Medication, Category::LabResult, Category::Diagnosis,
                 Category::Procedure, Category::Other})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

struct ClinicalEvent {
  std::string id;
  std::string label;
  Category category = Category::Other;
  TimeAnchor anchor;
  SourceSpan span;

  friend bool operator==(const ClinicalEvent& a, const ClinicalEvent& b) {
    return a.id == b.id && a.label == b.label && a.category == b.category && a.anchor == b.anchor;
  }
};

struct Timeline {
  std::string name;
  std::vector<ClinicalEvent> events;
  SourceSpan span;

  const ClinicalEvent* find(std::string_view id) const {
    for (const auto& e : events)
      if (e.id == id) return &e;
    return nullptr;
  }
  const ClinicalEvent& at(std::string_view id) const {
    if (auto e = find(id)) return *e;
    throw Error("UnknownEvent", "timeline '" + name + "' has no event '" + std::string(id) + "'");
  }

  friend bool operator==(const Timeline& a, const Timeline& b) { return a.name == b.name && a.events == b.events; }
};

/// Checks interval ordering and id uniqueness.
inline Diagnostics check_timeline(const Timeline& tl) {
  Diagnostics out;
  for (std::size_t i = 0; i < tl.events.size(); ++i) {
    const auto& e = tl.events[i];
    if (e.anchor.kind == TimeAnchor::Kind::Interval && e.anchor.end < e.anchor.start)
      out.push_back({"InvalidInterval", "interval of '" + e.id + "' ends before it starts", e.span, e.id});
    for (std::size_t j = 0; j < i; ++j)
      if (tl.events[j].id == e.id)
        out.push_back({"DuplicateName", "event '" + e.id + "' appears twice in timeline '" + tl.name + "'", e.span,
                       e.id});
  }
  return out;
}

enum class TemporalRelation { Before, After, Overlaps, Contains, During, Starts, Finishes, Equals, Unknown };

inline const char* to_string(TemporalRelation r) {
  switch (r) {
    case TemporalRelation::Before: return "before";
    case TemporalRelation::After: return "after";
    case TemporalRelation::Overlaps: return "overlaps";
    case TemporalRelation::Contains: return "contains";
    case TemporalRelation::During: return "during";
    case TemporalRelation::Starts: return "starts";
    case TemporalRelation::Finishes: return "finishes";
    case TemporalRelation::Equals: return "equals";
    case TemporalRelation::Unknown: return "unknown";
  }
  return "?";
}

/// Three-valued truth for under-specified comparisons.
enum class Truth { False, True, Unknown };

inline const char* to_string(Truth t) {
  switch (t) {
    case Truth::False: return "false";
    case Truth::True: return "true";
    case Truth::Unknown: return "unknown";
  }
  return "?";
}

namespace detail {

using Endpoint = std::optional<std::int64_t>;

inline Truth lt(Endpoint a, Endpoint b) {
  if (!a || !b) return Truth::Unknown;
  return *a < *b ? Truth::True : Truth::False;
}

/// Relation between two fully known [start, end] pairs (start <= end).
/// Instants are zero-length intervals. Allen's thirteen relations fold onto
/// this vocabulary: meets counts as before, met-by as after, overlapped-by as
/// overlaps, started-by and finished-by as contains.
inline TemporalRelation relation_known(std::int64_t as, std::int64_t ae, std::int64_t bs, std::int64_t be) {
  using R = TemporalRelation;
  if (as == bs && ae == be) return R::Equals;
  if (ae < bs) return R::Before;
  if (be < as) return R::After;
  if (as == bs) return ae < be ? R::Starts : R::Contains;
  if (ae == be) return bs < as ? R::Finishes : R::Contains;
  if (ae == bs) return R::Before;
  if (be == as) return R::After;
  if (bs < as && ae < be) return R::During;
  if (as < bs && be < ae) return R::Contains;
  return R::Overlaps;
}

}  // namespace detail

/// Relation of `a` to `b`. With under-specified anchors every consistent
/// completion of the missing endpoints is tried (an open end lies at or after
/// its start); the answer is definite only when all completions agree.
inline TemporalRelation relation(const TimeAnchor& a, const TimeAnchor& b) {
  std::array<detail::Endpoint, 4> ends{a.start_seconds(), a.end_seconds(), b.start_seconds(), b.end_seconds()};
  if (std::all_of(ends.begin(), ends.end(), [](const auto& e) { return e.has_value(); }))
    return detail::relation_known(*ends[0], *ends[1], *ends[2], *ends[3]);

  // Work on doubled values so "strictly between two known points" exists.
  std::vector<std::int64_t> known;
  for (const auto& e : ends)
    if (e) known.push_back(*e * 2);
  std::vector<std::int64_t> candidates;
  for (auto k : known) candidates.insert(candidates.end(), {k - 1, k, k + 1});
  const auto lo = known.empty() ? 0 : *std::min_element(known.begin(), known.end());
  const auto hi = known.empty() ? 0 : *std::max_element(known.begin(), known.end());
  candidates.insert(candidates.end(), {lo - 3, hi + 3});
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::optional<TemporalRelation> seen;
  std::array<std::int64_t, 4> v{};
  bool consistent = true;
  auto assign = [&](auto&& self, std::size_t i) -> void {
    if (!consistent) return;
    if (i == 4) {
      if (v[0] > v[1] || v[2] > v[3]) return;
      auto r = detail::relation_known(v[0], v[1], v[2], v[3]);
      if (seen && *seen != r) consistent = false;
      seen = r;
      return;
    }
    if (ends[i]) {
      v[i] = *ends[i] * 2;
      self(self, i + 1);
      return;
    }
    for (auto c : candidates) {
      v[i] = c;
      self(self, i + 1);
    }
  };
  assign(assign, 0);
  if (!consistent || !seen) return TemporalRelation::Unknown;
  return *seen;
}

inline TemporalRelation relation(const ClinicalEvent& a, const ClinicalEvent& b) {
  if (&a == &b || a.id == b.id) return TemporalRelation::Equals;
  return relation(a.anchor, b.anchor);
}

/// Strict comparison of start points.
inline Truth starts_before(const ClinicalEvent& a, const ClinicalEvent& b) {
  return detail::lt(a.anchor.start_seconds(), b.anchor.start_seconds());
}

/// Orders ids like E2 < E10 (alphabetic prefix, then numeric suffix).
inline bool natural_less(std::string_view a, std::string_view b) {
  auto split = [](std::string_view s) {
    std::size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    std::string_view num = s.substr(i);
    std::uint64_t n = 0;
    for (char c : num) n = n * 10 + static_cast<std::uint64_t>(c - '0');
    return std::tuple{s.substr(0, i), !num.empty(), n, s};
  };
  return split(a) < split(b);
}

/// Every event that definitely starts before `b`, ordered by start then id.
/// An open-ended event can start before `b` while its relation to `b` stays
/// undetermined; such events are left out.
inline std::vector<ClinicalEvent> events_before(const Timeline& tl, std::string_view b) {
  const ClinicalEvent& target = tl.at(b);
  std::vector<ClinicalEvent> out;
  for (const auto& e : tl.events)
    if (e.id != target.id && starts_before(e, target) == Truth::True &&
        relation(e, target) != TemporalRelation::Unknown)
      out.push_back(e);
  std::sort(out.begin(), out.end(), [](const ClinicalEvent& x, const ClinicalEvent& y) {
    if (x.anchor.start.seconds != y.anchor.start.seconds) return x.anchor.start.seconds < y.anchor.start.seconds;
    return natural_less(x.id, y.id);
  });
  return out;
}

inline const TimeAnchor& when(const Timeline& tl, std::string_view id) { return tl.at(id).anchor; }

// ---------------------------------------------------------------------------
// Queries

struct Query {
  enum class Kind { When, Relation, StartsBefore, Before };
  Kind kind = Kind::When;
  std::vector<std::string> args;

  friend bool operator==(const Query&, const Query&) = default;
};

/// Accepts exactly when(ID), relation(ID, ID), starts_before(ID, ID) and
/// before(ID). Errors carry a QuerySyntaxError with the offending column.
inline Result<Query> parse_query(std::string_view text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) {
    return Diagnostic{"QuerySyntaxError", msg, {"<query>", 1, static_cast<int>(pos) + 1}, std::string(text)};
  };
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto ident = [&]() -> std::string {
    std::size_t begin = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
    return std::string(text.substr(begin, pos - begin));
  };

  skip_ws();
  const std::size_t name_pos = pos;
  std::string name = ident();
  Query q;
  std::size_t arity = 0;
  if (name == "when") {
    q.kind = Query::Kind::When;
    arity = 1;
  } else if (name == "relation") {
    q.kind = Query::Kind::Relation;
    arity = 2;
  } else if (name == "starts_before") {
    q.kind = Query::Kind::StartsBefore;
    arity = 2;
  } else if (name == "before") {
    q.kind = Query::Kind::Before;
    arity = 1;
  } else {
    pos = name_pos;
    return fail(name.empty() ? "expected a query name"
                             : "unsupported query '" + name + "' (expected when, relation, starts_before or before)");
  }
  skip_ws();
  if (pos >= text.size() || text[pos] != '(') return fail("expected '('");
  ++pos;
  for (std::size_t i = 0; i < arity; ++i) {
    skip_ws();
    if (i > 0) {
      if (pos >= text.size() || text[pos] != ',') return fail("expected ','");
      ++pos;
      skip_ws();
    }
    std::string id = ident();
    if (id.empty()) return fail("expected an event id");
    q.args.push_back(std::move(id));
  }
  skip_ws();
  if (pos >= text.size() || text[pos] != ')') return fail("expected ')'");
  ++pos;
  skip_ws();
  if (pos != text.size()) return fail("unexpected trailing input");
  return q;
}

/// Answer text: an anchor, a relation name, true/false/unknown, or one event
/// id per line. Throws Error(UnknownEvent).
inline std::string evaluate_query(const Timeline& tl, const Query& q) {
  switch (q.kind) {
    case Query::Kind::When: return to_string(when(tl, q.args[0]));
    case Query::Kind::Relation: return to_string(relation(tl.at(q.args[0]), tl.at(q.args[1])));
    case Query::Kind::StartsBefore: return to_string(starts_before(tl.at(q.args[0]), tl.at(q.args[1])));
    case Query::Kind::Before: {
      std::string out;
      for (const auto& e : events_before(tl, q.args[0])) {
        if (!out.empty()) out += '\n';
        out += e.id;
      }
      return out;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json anchor_to_json(const TimeAnchor& a) {
  nlohmann::ordered_json j;
  switch (a.kind) {
    case TimeAnchor::Kind::Instant:
      j["kind"] = "instant";
      j["t"] = a.start.text;
      break;
    case TimeAnchor::Kind::Interval:
      j["kind"] = "interval";
      j["start"] = a.start.text;
      j["end"] = a.end.text;
      break;
    case TimeAnchor::Kind::After:
      j["kind"] = "after";
      j["t"] = a.start.text;
      break;
    case TimeAnchor::Kind::Unknown: j["kind"] = "unknown"; break;
  }
  return j;
}

inline nlohmann::ordered_json to_json(const ClinicalEvent& e) {
  nlohmann::ordered_json j;
  j["id"] = e.id;
  j["label"] = e.label;
  j["category"] = to_string(e.category);
  j["anchor"] = anchor_to_json(e.anchor);
  return j;
}

/// Reads one JSON object per line ({id, label, category, anchor}); blank lines
/// are skipped. Every malformed line is reported.
inline Result<Timeline> load_timeline_jsonl(std::string_view text, std::string name,
                                            const std::string& file = "<jsonl>") {
  Timeline tl;
  tl.name = std::move(name);
  Diagnostics errors;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    SourceSpan span{file, lineno, 1};
    try {
      auto j = nlohmann::json::parse(line);
      ClinicalEvent e;
      e.id = j.at("id").get<std::string>();
      e.label = j.value("label", std::string{});
      auto cat = category_from(j.value("category", std::string("other")));
      if (!cat) throw std::runtime_error("unknown category");
      e.category = *cat;
      const auto& a = j.at("anchor");
      const std::string kind = a.at("kind").get<std::string>();
      if (kind == "instant")
        e.anchor = TimeAnchor::instant(time_point(a.at("t").get<std::string>()));
      else if (kind == "interval")
        e.anchor = TimeAnchor::interval(time_point(a.at("start").get<std::string>()),
                                        time_point(a.at("end").get<std::string>()));
      else if (kind == "after")
        e.anchor = TimeAnchor::after(time_point(a.at("t").get<std::string>()));
      else if (kind == "unknown")
        e.anchor = TimeAnchor::unknown();
      else
        throw std::runtime_error("unknown anchor kind '" + kind + "'");
      e.span = span;
      tl.events.push_back(std::move(e));
    } catch (const std::exception& ex) {
      errors.push_back({"SyntaxError", ex.what(), span, ""});
    }
  }
  for (auto& d : check_timeline(tl)) errors.push_back(std::move(d));
  if (!errors.empty()) return errors;
  return tl;
}

}  // namespace occ
