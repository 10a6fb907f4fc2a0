#include "thermogeo/acceptance.hpp"

#include <filesystem>
#include <iostream>

// Acceptance suite; the scratch directory for the determinism runs is argv[1] or ./acceptance_scratch.
int main(int argc, char** argv) {
  const std::filesystem::path scratch = argc > 1 ? argv[1] : "acceptance_scratch";
  const auto results = thermogeo::run_acceptance(scratch);
  std::cout << thermogeo::format_acceptance(results);
  std::filesystem::remove_all(scratch);
  for (const auto& r : results)
    if (!r.passed) return 1;
  return 0;
}
