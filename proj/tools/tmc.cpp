// tmc: validate, simulate, query and export `.tm` models.
//
// Exit status: 0 success, 1 semantic errors, 2 usage errors, 3 runtime errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "occ/occ.hpp"

namespace {

enum Exit { kOk = 0, kSemantic = 1, kUsage = 2, kRuntime = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool color_enabled() {
  const char* v = std::getenv("TM_COLOR");
  return v && std::string(v) == "1";
}

std::string paint(const std::string& text, const char* code) {
  if (!color_enabled()) return text;
  return std::string("\033[") + code + "m" + text + "\033[0m";
}

void print_diagnostic(std::ostream& out, const occ::Diagnostic& d, const std::string& file) {
  occ::SourceSpan span = d.span;
  if (span.file.empty()) span.file = file;
  out << occ::to_string(span) << " " << paint(d.rule, d.warning ? "33" : "31") << " " << d.message << "\n";
}

struct Input {
  std::string name;
  std::string text;
};

Input read_input(const std::string& path) {
  if (!path.empty() && path[0] == '@') {
    const std::string entry = path.substr(1);
    if (!occ::catalog::contains(entry)) throw UsageError("no catalog entry named '" + entry + "'");
    return {path, std::string(occ::catalog::source(entry))};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return {path, buf.str()};
}

// Parses and compiles; prints every error and returns nullopt on failure.
std::optional<occ::dsl::Document> load_document(const Input& input, std::ostream& report,
                                                std::optional<occ::dsl::Compiled>* compiled = nullptr) {
  auto doc = occ::dsl::parse(input.text, input.name);
  if (!doc) {
    for (const auto& d : doc.errors()) print_diagnostic(report, d, input.name);
    return std::nullopt;
  }
  auto c = occ::dsl::compile(doc.value());
  if (!c) {
    for (const auto& d : c.errors()) print_diagnostic(report, d, input.name);
    return std::nullopt;
  }
  for (const auto& w : c.value().warnings) print_diagnostic(std::cerr, w, input.name);
  if (compiled) *compiled = std::move(c).value();
  return std::move(doc).value();
}

int cmd_validate(const std::string& file) {
  Input input = read_input(file);
  return load_document(input, std::cout) ? kOk : kSemantic;
}

int cmd_simulate(const std::string& file, const std::string& scenario, const std::string& trace_path,
                 std::int64_t max_steps) {
  Input input = read_input(file);
  std::optional<occ::dsl::Compiled> compiled;
  auto doc = load_document(input, std::cerr, &compiled);
  if (!doc) return kSemantic;
  if (!doc->find_scenario(scenario)) throw UsageError("no scenario named '" + scenario + "' in " + input.name);
  if (max_steps < 0) throw UsageError("--max-steps must not be negative");

  occ::SimState state = occ::dsl::start_scenario(*compiled, *doc, scenario);
  occ::Trace trace = occ::run(state, max_steps);
  const bool budget = !occ::enabled_events(*compiled->behavior, state).empty() || state.pending_stimuli();

  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (trace_path != "-") {
    file_out.open(trace_path, std::ios::binary);
    if (!file_out) throw UsageError("cannot write '" + trace_path + "'");
    out = &file_out;
  }
  *out << occ::to_json_lines(trace);
  out->flush();

  std::size_t fired = 0, reverts = 0, stimuli = 0;
  for (const auto& r : trace) {
    if (r.kind == occ::RecordKind::Fire) ++fired;
    if (r.kind == occ::RecordKind::Revert) ++reverts;
    if (r.kind == occ::RecordKind::Stimulus) ++stimuli;
  }
  std::ostream& summary = trace_path == "-" ? std::cerr : std::cout;
  summary << "fired=" << fired << " reverts=" << reverts << " stimuli=" << stimuli
          << " end=" << (budget ? "budget" : "quiescent") << "\n";
  return kOk;
}

int cmd_query(const std::string& file, const std::string& text, const std::string& timeline_name) {
  auto query = occ::parse_query(text);
  if (!query) {
    for (const auto& d : query.errors()) std::cerr << "query:" << d.span.column << " " << paint(d.rule, "31") << " "
                                                   << d.message << "\n";
    return kUsage;
  }

  Input input = read_input(file);
  std::vector<occ::Timeline> timelines;
  if (file.size() > 6 && file.substr(file.size() - 6) == ".jsonl") {
    auto tl = occ::load_timeline_jsonl(input.text, timeline_name.empty() ? "timeline" : timeline_name, input.name);
    if (!tl) {
      for (const auto& d : tl.errors()) print_diagnostic(std::cerr, d, input.name);
      return kSemantic;
    }
    timelines.push_back(std::move(tl).value());
  } else {
    std::optional<occ::dsl::Compiled> compiled;
    if (!load_document(input, std::cerr, &compiled)) return kSemantic;
    timelines = compiled->timelines;
  }

  const occ::Timeline* tl = nullptr;
  for (const auto& t : timelines)
    if (timeline_name.empty() || t.name == timeline_name || timelines.size() == 1) {
      tl = &t;
      break;
    }
  if (!tl) {
    std::cerr << input.name << " " << paint("UnknownTimeline", "31") << " "
              << (timeline_name.empty() ? std::string("no timeline declared") : "no timeline named '" + timeline_name + "'")
              << "\n";
    return kSemantic;
  }
  std::cout << occ::evaluate_query(*tl, query.value()) << "\n";
  return kOk;
}

int cmd_export(const std::string& file, const std::string& format, const std::string& level_name) {
  if (format != "dot" && format != "json") throw UsageError("unsupported format '" + format + "' (use dot or json)");
  auto level = occ::dsl::parse_dot_level(level_name);
  if (!level) throw UsageError(level.errors().front().rule + ": " + level.errors().front().message);

  Input input = read_input(file);
  auto doc = load_document(input, std::cerr);
  if (!doc) return kSemantic;
  if (format == "dot")
    std::cout << occ::dsl::export_dot(*doc, level.value());
  else
    std::cout << occ::dsl::export_json(*doc).dump(2) << "\n";
  return kOk;
}

int cmd_catalog_list() {
  for (const auto& name : occ::catalog::names()) {
    const auto doc = occ::catalog::load(name);
    std::cout << name << "\tthimacs=" << doc.model.thimacs.size() << " events=" << doc.events.size()
              << " scenarios=" << doc.scenarios.size() << " timelines=" << doc.timelines.size() << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Validate, simulate, query and export occurrence models"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string file, scenario, trace = "-", query, timeline, format, level = "static";
  std::int64_t max_steps = 1000;

  auto* validate = app.add_subcommand("validate", "Check a model and report every violation");
  validate->add_option("file", file, ".tm file, or @name for a catalog entry")->required();

  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write its trace as JSON lines");
  simulate->add_option("file", file, ".tm file, or @name for a catalog entry")->required();
  simulate->add_option("--scenario", scenario, "Scenario to run")->required();
  simulate->add_option("--trace", trace, "Trace output file, - for standard output");
  simulate->add_option("--max-steps", max_steps, "Maximum number of firings");

  auto* query_cmd = app.add_subcommand("query", "Answer a timeline query");
  query_cmd->add_option("file", file, ".tm or .jsonl timeline file, or @name")->required();
  query_cmd->add_option("query", query, "when(ID) | relation(ID, ID) | starts_before(ID, ID) | before(ID)")->required();
  query_cmd->add_option("--timeline", timeline, "Timeline to query when the file declares several");

  auto* export_cmd = app.add_subcommand("export", "Render a model as DOT or JSON");
  export_cmd->add_option("file", file, ".tm file, or @name for a catalog entry")->required();
  export_cmd->add_option("--format", format, "dot or json")->required();
  export_cmd->add_option("--level", level, "static or behavior (DOT only)");

  auto* catalog = app.add_subcommand("catalog", "Built-in example models");
  catalog->require_subcommand(1);
  catalog->add_subcommand("list", "List catalog entries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(file);
    if (*simulate) return cmd_simulate(file, scenario, trace, max_steps);
    if (*query_cmd) return cmd_query(file, query, timeline);
    if (*export_cmd) return cmd_export(file, format, level);
    if (*catalog) return cmd_catalog_list();
  } catch (const UsageError& e) {
    std::cerr << "tmc: " << e.what() << "\n";
    return kUsage;
  } catch (const occ::Error& e) {
    std::cerr << "tmc: " << e.what() << "\n";
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "tmc: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
