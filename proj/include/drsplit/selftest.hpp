#pragma once

#include <string>
#include <vector>

namespace drsplit {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Dense-oracle and invariant checks on small grids. inject_fault = "div-sign"
/// flips the sign of the divergence seen by the adjointness check.
std::vector<SelftestCheck> run_selftest_suite(const std::string& inject_fault = "");

}  // namespace drsplit
