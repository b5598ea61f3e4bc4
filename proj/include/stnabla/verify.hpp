// Verification suites: self-contained checks that recompute theorem-level
// identities from independent paths at small rank and report pass/fail.

#pragma once

#include <string>
#include <vector>

namespace stnabla {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Names of the runnable verification suites.
std::vector<std::string> verify_suites();

// Runs one named suite. Throws input_error for an unknown name.
std::vector<CheckResult> run_verify_suite(const std::string& name);

// Runs every check once, in a fixed order.
std::vector<CheckResult> run_acceptance();

}  // namespace stnabla
