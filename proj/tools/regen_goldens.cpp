// Writes the golden traces of every catalog scenario, computed by the
// reference simulator in tests/oracle. Usage: regen_goldens CATALOG_DIR

#include <filesystem>
#include <fstream>
#include <iostream>

#include "occ/occ.hpp"
#include "oracle/sim_oracle.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: regen_goldens CATALOG_DIR\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  for (const auto& name : occ::catalog::names()) {
    const auto doc = occ::catalog::load(name);
    const auto compiled = occ::dsl::compile(doc).value();
    for (const auto& s : doc.scenarios) {
      occ::Env bindings(s.bindings.begin(), s.bindings.end());
      auto trace = oracle::simulate(*compiled.behavior, bindings, s.stimuli, 1000);
      const auto path = dir / occ::catalog::golden_path(name, s.name);
      std::filesystem::create_directories(path.parent_path());
      std::ofstream(path, std::ios::binary) << occ::to_json_lines(trace);
      std::cout << path.string() << ": " << trace.size() << " records\n";
    }
  }
  return 0;
}
