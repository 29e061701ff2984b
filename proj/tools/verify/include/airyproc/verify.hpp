#ifndef AIRYPROC_VERIFY_HPP
#define AIRYPROC_VERIFY_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "airyproc/stats.hpp"

namespace airyproc::verify {

struct VerifyConfig {
  std::uint64_t seed = 20261015;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool quick = false;    // exact/deterministic subset only
  std::vector<int> only; // empty = every criterion selected by `quick`
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool exact = false;  // deterministic linear-algebra property vs. seeded statistics
  bool passed = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::vector<TestReport> reports;
  std::vector<std::pair<std::string, std::string>> details;
  std::string error;  // set if the criterion threw

  bool within_budget() const { return seconds < budget_seconds; }
};

constexpr int kNumCriteria = 11;

/// Criteria run by `--quick`: the exact ones plus the reproducibility rerun.
std::vector<int> quick_criteria();

std::string criterion_name(int id);

/// Runs one criterion; never throws (failures are recorded in the result).
CriterionResult run_criterion(int id, const VerifyConfig& cfg);

/// Runs the selected criteria in order; one summary line per criterion goes to `log`.
std::vector<CriterionResult> run_verify(const VerifyConfig& cfg, std::ostream* log);

/// One-line human summary, e.g. "PASS  4 derivative law (97.1 s / 600 s): ...".
std::string summary_line(const CriterionResult& r);

std::string results_json(const std::vector<CriterionResult>& results, const VerifyConfig& cfg);

/// Statistic values of a result, in report order (used to compare reruns bit-for-bit).
std::vector<double> statistics_of(const CriterionResult& r);

}  // namespace airyproc::verify

#endif  // AIRYPROC_VERIFY_HPP
