#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "causalfuzz/causal.hpp"
#include "causalfuzz/fuzzer.hpp"
#include "causalfuzz/scenario.hpp"

namespace causalfuzz {

// Bumped when a file layout changes; every artifact carries it and readers
// reject mismatches.
inline constexpr int kSchemaVersion = 1;

nlohmann::json map_to_json(const MapSpec& map);
MapSpec map_from_json(const nlohmann::json& j);

nlohmann::json scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const nlohmann::json& j);

nlohmann::json trace_to_json(const Trace& trace);
Trace trace_from_json(const nlohmann::json& j);

nlohmann::json graph_to_json(const CausalGraph& g);
CausalGraph graph_from_json(const nlohmann::json& j);
std::string graph_to_dot(const CausalGraph& g);

nlohmann::json binary_matrix_to_json(const BinaryMatrix& m);
BinaryMatrix binary_matrix_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const CampaignConfig& cfg);
CampaignConfig config_from_json(const nlohmann::json& j);

std::string matrix_to_csv(const ScenarioMatrix& m);
ScenarioMatrix matrix_from_csv(const std::string& text);

std::string log_to_csv(const std::vector<LogRow>& rows);
std::vector<LogRow> log_from_csv(const std::string& text);

// Deterministic for a given result: counts and indices only, no timings.
nlohmann::json summary_to_json(const CampaignResult& r);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

// Writes config.json, log.csv, summary.json, and the FT/SAC/SAVC scenario
// and graph files under out_dir.
void write_campaign_outputs(const CampaignResult& result,
                            const CampaignConfig& cfg,
                            const std::filesystem::path& out_dir);

}  // namespace causalfuzz
