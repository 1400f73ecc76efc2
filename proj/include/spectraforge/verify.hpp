#pragma once

#include <string>
#include <vector>

namespace spectraforge {

struct CriterionResult {
  std::string suite;
  std::string name;
  bool pass = false;
  std::string detail;
};

// Runs the acceptance criteria, optionally restricted to one suite
// ("transport", "spectral", "gcl", "spco"). Results come back in a fixed
// order; each carries a one-line detail with the measured quantities.
std::vector<CriterionResult> run_acceptance(const std::string& suite = "");

}  // namespace spectraforge
