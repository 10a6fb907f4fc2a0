#pragma once

#include "thermogeo/scenario.hpp"

#include <string>
#include <vector>

namespace thermogeo {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // measured values, %.3e
};

// One scenario per kind, small enough to run in a fraction of a second each.
std::vector<Scenario> builtin_scenarios();

// The eleven acceptance checks in order. Criterion 11 runs the built-in scenarios twice into
// scratch directories under `scratch` and compares every emitted file byte for byte.
std::vector<CriterionResult> run_acceptance(const std::filesystem::path& scratch);

// "[PASS] 3 name: detail" lines followed by a summary line.
std::string format_acceptance(const std::vector<CriterionResult>& results);

}  // namespace thermogeo
