#pragma once

// The built-in example models, compiled into the library from the catalog
// directory.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "occ/catalog_data.hpp"
#include "occ/dsl/compile.hpp"
#include "occ/dsl/parser.hpp"

namespace occ::catalog {

/// Raw contents of a catalog file such as "inventory.tm" or
/// "goldens/inventory.decline.jsonl".
inline std::optional<std::string_view> file(std::string_view path) {
  for (const auto& [name, text] : data::kFiles)
    if (name == path) return text;
  return std::nullopt;
}

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"socrates", "inventory", "queue", "clinical"};
  return n;
}

inline bool contains(std::string_view name) {
  return std::find(names().begin(), names().end(), name) != names().end();
}

inline std::string_view source(std::string_view name) {
  if (!contains(name)) throw Error("UnknownEntry", "no catalog entry named '" + std::string(name) + "'");
  auto text = file(std::string(name) + ".tm");
  if (!text) throw std::logic_error("catalog source for '" + std::string(name) + "' is missing");
  return *text;
}

/// Parsed catalog document. Throws Error(UnknownEntry).
inline dsl::Document load(std::string_view name) {
  auto doc = dsl::parse(source(name), "@" + std::string(name));
  if (!doc) throw std::logic_error("catalog entry '" + std::string(name) + "' does not parse: " +
                                   doc.errors().front().message);
  return std::move(doc).value();
}

struct QueryAnswer {
  std::string query;
  std::string answer;
};

/// What one scenario of an entry is expected to produce.
struct Expectation {
  std::string scenario;
  std::string trace;  // JSON lines; empty when there is no golden run
  std::vector<QueryAnswer> answers;
};

inline std::string golden_path(std::string_view entry, std::string_view scenario) {
  return "goldens/" + std::string(entry) + "." + std::string(scenario) + ".jsonl";
}

/// Golden fixtures of an entry: one per declared scenario, plus a "queries"
/// expectation for entries that ship query answers.
inline std::vector<Expectation> scenarios(std::string_view name) {
  const dsl::Document doc = load(name);
  std::vector<Expectation> out;
  for (const auto& s : doc.scenarios) {
    Expectation e{s.name, {}, {}};
    if (auto g = file(golden_path(name, s.name))) e.trace = std::string(*g);
    out.push_back(std::move(e));
  }
  if (auto q = file(std::string(name) + ".queries.json")) {
    Expectation e{"queries", {}, {}};
    for (const auto& item : nlohmann::json::parse(*q))
      e.answers.push_back({item.at("query").get<std::string>(), item.at("answer").get<std::string>()});
    out.push_back(std::move(e));
  }
  return out;
}

/// The Socrates model assembled in code rather than parsed.
inline ModelDecl socrates_model() {
  ModelDecl m;
  ThimacDecl socrates{"Socrates", std::nullopt, {}, "", {}};
  socrates.actions.push_back({ActionKind::Create, "", "socrates", {}});
  ThimacDecl walk{"Walk", "Socrates", {}, "", {}};
  walk.actions.push_back({ActionKind::Create, "", "walking", {}});
  walk.actions.push_back({ActionKind::Process, "", "", {}});
  m.thimacs = {socrates, walk};
  m.triggers.push_back({"Socrates.create", "Walk.create", "", {}});
  m.flows.push_back({"Walk.create", "Walk.process", "walk", {}});
  return m;
}

}  // namespace occ::catalog
