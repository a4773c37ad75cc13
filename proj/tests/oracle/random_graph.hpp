#pragma once

// Random behavior models for engine/oracle comparison: one thimac whose
// create -> process -> process ... chain carries up to eight events, guards
// and effects that stay inside small integer domains and a boolean, arbitrary sequence
// edges (cycles included), negative edges and external events.

#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

struct RandomModel {
  std::string source;
  int events = 0;
};

class ModelGenerator {
 public:
  explicit ModelGenerator(unsigned seed) : rng_(seed) {}

  RandomModel next() {
    const int n_events = pick(1, 8);
    const int n_process = pick(1, 4);
    std::ostringstream src;

    // X and Y range over five values each, F over two.
    const int xlo = pick(-2, 3), ylo = pick(0, 5);
    lo_[0] = xlo;
    lo_[1] = ylo;
    src << "var X: int in " << xlo << ".." << xlo + 4 << "\n";
    src << "var Y: int = " << ylo << " in " << ylo << ".." << ylo + 4 << "\n";
    src << "var F: bool = false\n\n";

    src << "thimac T {\n  create item\n";
    for (int p = 1; p <= n_process; ++p) src << "  process as p" << p << "\n";
    src << "}\n";
    src << "flow T.create";
    for (int p = 1; p <= n_process; ++p) src << " -> T.p" << p;
    src << "\n\n";

    std::vector<std::string> actions{"T.create"};
    for (int p = 1; p <= n_process; ++p) actions.push_back("T.p" + std::to_string(p));

    std::vector<bool> external(n_events + 1, false);
    for (int e = 1; e <= n_events; ++e) {
      src << "event E" << e << " = region { " << actions[pick(0, static_cast<int>(actions.size()) - 1)] << " }\n";
      if (chance(35)) {
        src << "  effect " << effect();
        if (chance(30)) src << ", " << effect();
        src << "\n";
      }
      if (chance(20)) src << "  guard " << guard() << "\n";
      if (chance(20)) {
        src << "  external\n";
        external[e] = true;
      }
    }
    src << "\n";

    const int n_edges = pick(0, n_events * 2);
    for (int k = 0; k < n_edges; ++k) {
      int from = pick(1, n_events), to = pick(1, n_events);
      if (from == to) continue;
      if (chance(15)) {
        src << "negedge E" << from << " -> revert E" << to << "\n";
      } else {
        src << "edge E" << from << " -> E" << to;
        if (chance(50)) src << " guard " << guard();
        src << "\n";
      }
    }

    src << "\nscenario run {\n  bind X = " << xlo + pick(0, 4) << "\n";
    if (chance(50)) src << "  bind Y = " << ylo + pick(0, 4) << "\n";
    if (chance(30)) src << "  bind F = true\n";
    for (int e = 1; e <= n_events; ++e) {
      if (!external[e] && !chance(10)) continue;
      const int times = pick(1, 2);
      for (int t = 0; t < times; ++t) src << "  stimulus E" << e << " at " << pick(0, 12) << "\n";
    }
    src << "}\n";
    return {src.str(), n_events};
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(int percent) { return pick(1, 100) <= percent; }

  std::string int_var(int* lo) {
    const bool x = chance(50);
    *lo = x ? lo_[0] : lo_[1];
    return x ? "X" : "Y";
  }

  std::string atom() {
    if (chance(25)) return chance(50) ? "F" : "!F";
    int lo = 0;
    std::string v = int_var(&lo);
    static const char* ops[] = {"<", "<=", ">", ">=", "==", "!="};
    return v + " " + ops[pick(0, 5)] + " " + std::to_string(lo + pick(0, 4));
  }

  std::string guard() {
    if (chance(30)) return atom() + (chance(50) ? " && " : " || ") + atom();
    return atom();
  }

  std::string effect() {
    if (chance(25)) return chance(50) ? "F := !F" : "F := true";
    int lo = 0;
    std::string v = int_var(&lo);
    return v + " := " + std::to_string(lo + pick(0, 4));
  }

  std::mt19937 rng_;
  int lo_[2] = {0, 0};
};

}  // namespace oracle
