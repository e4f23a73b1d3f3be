#include "causalfuzz/report.hpp"

#include <cstdio>
#include <map>
#include <stdexcept>

#include "causalfuzz/serialization.hpp"

namespace causalfuzz {

RunSummary load_run_summary(const std::filesystem::path& dir) {
  const nlohmann::json summary =
      nlohmann::json::parse(read_text_file(dir / "summary.json"));
  if (!summary.contains("schema_version") ||
      summary.at("schema_version").get<int>() != kSchemaVersion)
    throw std::runtime_error("report: schema-version mismatch in '" +
                             dir.string() + "'");
  RunSummary out;
  out.method = summary.at("method").get<std::string>();
  out.violations = summary.at("violations").get<int>();
  out.sac = summary.at("sac").get<int>();
  out.savc = summary.at("savc").get<int>();
  out.first_failure = summary.at("first_failure").get<int>();

  const auto log = log_from_csv(read_text_file(dir / "log.csv"));
  double mutation = 0.0, feedback = 0.0;
  for (const LogRow& row : log) {
    mutation += row.mutation_time_s;
    feedback += row.feedback_time_s;
  }
  if (!log.empty()) {
    mutation /= static_cast<double>(log.size());
    feedback /= static_cast<double>(log.size());
  }
  out.mean_mutation_time_s = mutation;
  out.mean_feedback_time_s = feedback;
  return out;
}

std::string report_csv(const std::vector<RunSummary>& runs) {
  if (runs.empty()) throw std::runtime_error("report: no runs");
  struct Acc {
    int n = 0;
    double violations = 0, sac = 0, savc = 0;
    int failing = 0;
    double first_failure = 0;
    double mutation = 0, feedback = 0;
  };
  std::map<std::string, Acc> by_method;
  for (const RunSummary& r : runs) {
    Acc& a = by_method[r.method];
    ++a.n;
    a.violations += r.violations;
    a.sac += r.sac;
    a.savc += r.savc;
    if (r.first_failure >= 0) {
      ++a.failing;
      a.first_failure += r.first_failure;
    }
    a.mutation += r.mean_mutation_time_s;
    a.feedback += r.mean_feedback_time_s;
  }
  std::string out =
      "method,runs,mean_violations,mean_sac,mean_savc,mean_first_failure,"
      "mean_mutation_time_s,mean_feedback_time_s\n";
  char buf[256];
  for (const auto& [method, a] : by_method) {
    const double n = static_cast<double>(a.n);
    char ff[32] = "n/a";
    if (a.failing > 0)
      std::snprintf(ff, sizeof(ff), "%.3f", a.first_failure / a.failing);
    std::snprintf(buf, sizeof(buf), "%s,%d,%.3f,%.3f,%.3f,%s,%.6f,%.6f\n",
                  method.c_str(), a.n, a.violations / n, a.sac / n, a.savc / n,
                  ff, a.mutation / n, a.feedback / n);
    out += buf;
  }
  return out;
}

}  // namespace causalfuzz
