#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fqsd {

struct CheckResult {
  std::string name;
  double measured = 0;
  double tolerance = 0;
  bool passed = false;
};

/// One named verification suite: every check carries the measured value and
/// the tolerance it was held to, so reports stay auditable.
struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  std::vector<double> times;  // sample times, when the suite has them
  std::vector<std::pair<std::string, double>> extra;
  double runtime_s = 0;

  bool all_passed() const;
};

SuiteReport verify_novikov();
SuiteReport verify_recovery();
SuiteReport verify_oracle();
SuiteReport verify_chain();
SuiteReport verify_symmetry();
SuiteReport verify_markov();

/// Dispatch by name; "all" runs every suite. Unknown names raise ConfigError.
std::vector<SuiteReport> run_verify(const std::string& suite);

std::string suites_to_json(const std::vector<SuiteReport>& reports);

}  // namespace fqsd
