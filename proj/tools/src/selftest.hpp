#pragma once

#include <string>
#include <vector>

namespace thermoforge::cli {

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Fast invariant checks over every module.
std::vector<SelftestResult> run_selftest();

}  // namespace thermoforge::cli
