#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bose {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Suite names: kernel, ensemble, thermo, loops, tilted, dickman, pd,
/// pareto, free-cells, rdm.
std::vector<std::string> selftest_suites();

/// Runs one oracle suite; throws std::invalid_argument for unknown names.
std::vector<CheckResult> run_selftest_suite(const std::string& suite);

/// Prints one PASS/FAIL line per check and returns the number of failures.
int run_selftest(const std::string& suite, std::ostream& os);

}  // namespace bose
