#pragma once

// The acceptance criteria as runnable checks, shared by the acceptance binary
// and the CLI self-test.

#include <string>
#include <vector>

namespace surflab::checks {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;             ///< measured quantities behind the verdict
  std::vector<std::string> info;  ///< extra measurements that do not affect the verdict
  double seconds = 0.0;
  double budget = 0.0;            ///< runtime limit in seconds, part of the verdict
};

struct CriterionOptions {
  int workers = 0;  ///< ensemble threads, 0 = all available
};

struct Criterion {
  int id;
  const char* name;
  double budget;
  CriterionResult (*run)(const CriterionOptions&);
};

const std::vector<Criterion>& criteria();

/// Runs one criterion, timing it and turning exceptions into a failure.
CriterionResult run_criterion(const Criterion& c, const CriterionOptions& opt = {});

}  // namespace surflab::checks
