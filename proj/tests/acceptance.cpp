// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Tolerances and seeds are pinned in the suite module.

#include <filesystem>
#include <iostream>
#include <string>

#include "gibbsvs/suite.hpp"

int main(int argc, char** argv) {
  const std::string work = argc > 1 ? argv[1] : "acceptance_out";
  const std::string only = argc > 2 ? argv[2] : "";
  std::filesystem::create_directories(work);
  bool all = true;
  for (const auto& c : gibbsvs::suite_criteria("all", work)) {
    if (!only.empty() && c.name.find(only) == std::string::npos) continue;
    const auto r = c.run();
    all = all && r.passed;
    std::cout << gibbsvs::format_result(r) << std::endl;
  }
  std::cout << (all ? "acceptance: all criteria passed" : "acceptance: FAILED") << "\n";
  return all ? 0 : 1;
}
