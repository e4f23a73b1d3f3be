// causalfuzz: campaign runner, scenario replay, standalone causal discovery,
// synthetic-data generation, and report aggregation.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "causalfuzz/feedback.hpp"
#include "causalfuzz/fuzzer.hpp"
#include "causalfuzz/report.hpp"
#include "causalfuzz/serialization.hpp"
#include "causalfuzz/simulator.hpp"
#include "causalfuzz/synth.hpp"

namespace fs = std::filesystem;
using causalfuzz::kSchemaVersion;

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::uint64_t seed, bool seed_set, int budget, bool budget_set,
            const std::string& method) {
  const nlohmann::json cj =
      nlohmann::json::parse(causalfuzz::read_text_file(config_path));
  causalfuzz::CampaignConfig cfg = causalfuzz::config_from_json(cj);
  if (seed_set) cfg.seed = seed;
  if (budget_set) cfg.budget = budget;
  if (!method.empty()) cfg.method = method;
  cfg.validate();

  const causalfuzz::CampaignResult result = causalfuzz::run_campaign(cfg);
  causalfuzz::write_campaign_outputs(result, cfg, out_dir);
  std::printf("method=%s seed=%llu executions=%d violations=%zu sac=%zu "
              "savc=%zu first_failure=%d\n",
              result.method.c_str(),
              static_cast<unsigned long long>(result.seed), result.executions,
              result.ft.size(), result.sac.size(), result.savc.size(),
              result.first_failure);
  return 0;
}

int cmd_replay(const std::string& scenario_path, const std::string& config_path,
               const std::string& out_path) {
  causalfuzz::CampaignConfig cfg;
  if (!config_path.empty())
    cfg = causalfuzz::config_from_json(
        nlohmann::json::parse(causalfuzz::read_text_file(config_path)));
  causalfuzz::ScenarioSpec spec = causalfuzz::scenario_from_json(
      nlohmann::json::parse(causalfuzz::read_text_file(scenario_path)));
  const causalfuzz::Trace trace =
      causalfuzz::simulate(spec, cfg.planner, cfg.sim);
  const auto verdict = causalfuzz::oracle(trace, spec.ego.destination,
                                          cfg.sim.arrival_threshold);
  if (!out_path.empty())
    causalfuzz::write_text_file(out_path,
                                causalfuzz::trace_to_json(trace).dump(2) + "\n");
  std::printf("%s degree=%.6f steps=%zu\n",
              verdict == causalfuzz::OracleResult::Violated ? "violated"
                                                            : "passed",
              causalfuzz::violation_degree(trace, spec.ego.destination),
              trace.steps.size());
  return 0;
}

int cmd_discover(const std::string& trace_path, const std::string& out_base,
                 const std::string& matrix_path,
                 const causalfuzz::AbstractionConfig& acfg,
                 const causalfuzz::DiscoveryConfig& dcfg) {
  const causalfuzz::Trace trace = causalfuzz::trace_from_json(
      nlohmann::json::parse(causalfuzz::read_text_file(trace_path)));
  const causalfuzz::ScenarioMatrix x =
      causalfuzz::abstract_scenario(trace, acfg);
  if (!matrix_path.empty())
    causalfuzz::write_text_file(matrix_path, causalfuzz::matrix_to_csv(x));
  const causalfuzz::CausalGraph g = causalfuzz::discover(x, dcfg);
  causalfuzz::write_text_file(out_base + ".json",
                              causalfuzz::graph_to_json(g).dump(2) + "\n");
  causalfuzz::write_text_file(out_base + ".dot", causalfuzz::graph_to_dot(g));
  std::printf("variables=%zu edges=%zu violation_edges=%zu%s\n", g.u(),
              g.binary.edge_count(), causalfuzz::violation_signature(g).size(),
              g.low_confidence ? " (low confidence)" : "");
  return 0;
}

int cmd_synth(const std::string& truth_path, int chain_vars, int q,
              const std::string& noise, std::uint64_t seed,
              const std::string& out_data, const std::string& out_truth) {
  causalfuzz::Matrix w;
  if (!truth_path.empty()) {
    const nlohmann::json j =
        nlohmann::json::parse(causalfuzz::read_text_file(truth_path));
    const auto rows = j.at("w").get<std::vector<std::vector<double>>>();
    w = causalfuzz::Matrix(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t c = 0; c < rows[i].size(); ++c) w.at(i, c) = rows[i][c];
  } else {
    causalfuzz::Rng rng(seed ^ 0xc0ffee);
    w = causalfuzz::make_chain(chain_vars, rng);
  }
  causalfuzz::NoiseKind kind = causalfuzz::NoiseKind::Uniform;
  if (noise == "laplace") kind = causalfuzz::NoiseKind::Laplace;
  else if (noise == "gaussian") kind = causalfuzz::NoiseKind::Gaussian;
  else if (noise != "uniform")
    throw std::runtime_error("unknown noise kind '" + noise + "'");
  if (kind == causalfuzz::NoiseKind::Gaussian)
    std::fprintf(stderr,
                 "warning: gaussian noise makes the model non-identifiable\n");

  const causalfuzz::SynthDataset ds =
      causalfuzz::synth_dataset(w, kind, q, seed);
  causalfuzz::ScenarioMatrix m;
  m.values = ds.x;
  for (std::size_t i = 0; i < ds.x.rows; ++i)
    m.labels.push_back("x" + std::to_string(i + 1));
  m.blocks = {static_cast<int>(ds.x.rows), 0, 0};
  causalfuzz::write_text_file(out_data, causalfuzz::matrix_to_csv(m));

  nlohmann::json truth;
  truth["schema_version"] = kSchemaVersion;
  std::vector<std::vector<double>> wt(w.rows, std::vector<double>(w.cols));
  for (std::size_t i = 0; i < w.rows; ++i)
    for (std::size_t c = 0; c < w.cols; ++c) wt[i][c] = w.at(i, c);
  truth["w"] = wt;
  truth["order"] = ds.order;
  causalfuzz::write_text_file(out_truth, truth.dump(2) + "\n");
  std::printf("dataset %zux%zu written\n", ds.x.rows, ds.x.cols);
  return 0;
}

int cmd_report(const std::vector<std::string>& dirs, const std::string& out) {
  std::vector<causalfuzz::RunSummary> runs;
  for (const std::string& dir : dirs) {
    if (fs::is_regular_file(fs::path(dir) / "summary.json")) {
      runs.push_back(causalfuzz::load_run_summary(dir));
      continue;
    }
    // A directory of run directories.
    std::vector<fs::path> children;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_directory() &&
          fs::is_regular_file(entry.path() / "summary.json"))
        children.push_back(entry.path());
    std::sort(children.begin(), children.end());
    for (const auto& child : children)
      runs.push_back(causalfuzz::load_run_summary(child));
  }
  const std::string csv = causalfuzz::report_csv(runs);
  if (out.empty())
    std::fputs(csv.c_str(), stdout);
  else
    causalfuzz::write_text_file(out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"causality-guided scenario fuzzing for a 2D traffic simulator"};
  app.require_subcommand(1);

  // run
  std::string run_config, run_out = "out", run_method;
  std::uint64_t run_seed = 0;
  int run_budget = 0;
  auto* run = app.add_subcommand("run", "run a fuzzing campaign");
  run->add_option("--config", run_config, "campaign config JSON")->required();
  run->add_option("--out", run_out, "output directory");
  auto* seed_opt = run->add_option("--seed", run_seed, "override rng seed");
  auto* budget_opt = run->add_option("--budget", run_budget, "override budget");
  run->add_option("--method", run_method, "override method (causal|random|ga)");

  // replay
  std::string replay_scenario, replay_config, replay_out;
  auto* replay = app.add_subcommand("replay", "re-execute a scenario file");
  replay->add_option("scenario", replay_scenario, "scenario JSON")->required();
  replay->add_option("--config", replay_config,
                     "campaign config used when it was recorded");
  replay->add_option("--out", replay_out, "write the trace JSON here");

  // discover
  std::string discover_trace, discover_out = "graph", discover_matrix;
  causalfuzz::AbstractionConfig acfg;
  causalfuzz::DiscoveryConfig dcfg;
  auto* discover = app.add_subcommand("discover",
                                      "discover a causal graph from a trace");
  discover->add_option("trace", discover_trace, "trace JSON")->required();
  discover->add_option("--out", discover_out, "output base name");
  discover->add_option("--matrix", discover_matrix,
                       "also write the abstracted matrix CSV here");
  discover->add_option("--sectors", acfg.sectors, "scene sectors");
  discover->add_option("--rings", acfg.rings, "scene rings");
  discover->add_option("--range", acfg.perception_range, "perception range");
  discover->add_option("--stride", acfg.stride, "sampling stride");
  discover->add_option("--threshold", dcfg.binarize_threshold,
                       "binarization threshold");

  // synth
  std::string synth_truth, synth_noise = "uniform";
  std::string synth_data = "synth.csv", synth_truth_out = "truth.json";
  int synth_vars = 5, synth_q = 5000;
  std::uint64_t synth_seed = 1;
  auto* synth = app.add_subcommand("synth",
                                   "generate ground-truth causal test data");
  synth->add_option("--truth", synth_truth, "ground-truth W JSON (else a chain)");
  synth->add_option("--vars", synth_vars, "chain length");
  synth->add_option("--q", synth_q, "sample count");
  synth->add_option("--noise", synth_noise, "uniform|laplace|gaussian");
  synth->add_option("--seed", synth_seed, "rng seed");
  synth->add_option("--out-data", synth_data, "dataset CSV path");
  synth->add_option("--out-truth", synth_truth_out, "truth JSON path");

  // report
  std::vector<std::string> report_dirs;
  std::string report_out;
  auto* report = app.add_subcommand("report", "aggregate campaign logs");
  report->add_option("dirs", report_dirs, "run directories")->required();
  report->add_option("--out", report_out, "write CSV here (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(run_config, run_out, run_seed, seed_opt->count() > 0,
                     run_budget, budget_opt->count() > 0, run_method);
    if (replay->parsed())
      return cmd_replay(replay_scenario, replay_config, replay_out);
    if (discover->parsed())
      return cmd_discover(discover_trace, discover_out, discover_matrix, acfg,
                          dcfg);
    if (synth->parsed())
      return cmd_synth(synth_truth, synth_vars, synth_q, synth_noise,
                       synth_seed, synth_data, synth_truth_out);
    if (report->parsed()) return cmd_report(report_dirs, report_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
