#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace causalfuzz {

struct RunSummary {
  std::string method;
  int violations = 0;
  int sac = 0;
  int savc = 0;
  int first_failure = -1;  // -1 when the run never failed
  double mean_mutation_time_s = 0.0;
  double mean_feedback_time_s = 0.0;
};

// Reads summary.json and log.csv from one campaign output directory. Throws
// on missing files or schema mismatch.
RunSummary load_run_summary(const std::filesystem::path& dir);

// Per-method means over runs (first-failure averaged over failing runs only).
std::string report_csv(const std::vector<RunSummary>& runs);

}  // namespace causalfuzz
