#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace blowuplab::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;  // 0 when the criterion carries no runtime bound
};

/// Criteria 1-9; criterion 10 drives the command-line tool and lives with the acceptance binary.
CriterionResult run_criterion(int id);

/// The subset the `check` subcommand runs.
const std::vector<int>& fast_suite();

/// "PASS  3  name  (1.2 s)  detail"
std::string format_line(const CriterionResult& r);

/// Runs the given criteria, printing each line as it completes.
std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, std::ostream& out);

}  // namespace blowuplab::acceptance
