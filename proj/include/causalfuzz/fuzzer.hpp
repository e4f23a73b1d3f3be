#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causalfuzz/archetypes.hpp"
#include "causalfuzz/causal.hpp"
#include "causalfuzz/feedback.hpp"
#include "causalfuzz/rng.hpp"
#include "causalfuzz/simulator.hpp"

namespace causalfuzz {

struct ThresholdConfig {
  double theta_ts = 0.3;  // testing-sufficiency admission threshold
  double theta_vd = 0.0;  // violation-diversity threshold (strict >)
};

struct MutationConfig {
  double epsilon = 0.5;                 // exploration probability
  double longitudinal_jitter = 5.0;     // m along the waypoint's lane
  double lateral_jitter_fraction = 0.5; // of the lane width
  double speed_jitter = 2.0;            // m/s
  double waypoint_probability = 0.5;

  void validate() const;
};

struct GaConfig {
  int population = 8;
};

struct CampaignConfig {
  std::string method = "causal";  // causal | random | ga
  std::uint64_t seed = 1;
  int budget = 100;               // executions in the mutation loop
  double max_seconds = 0.0;       // optional wall-clock cap, 0 = unlimited
  ArchetypeConfig archetype;
  PlannerConfig planner;
  SimOptions sim;
  AbstractionConfig abstraction;
  DiscoveryConfig discovery;
  ThresholdConfig thresholds;
  MutationConfig mutation;
  GaConfig ga;

  void validate() const;
};

struct CorpusEntry {
  int id = 0;
  int parent_id = -1;       // -1 for initial seeds
  int execution_index = 0;  // 1-based, seeds included
  ScenarioSpec scenario;
  CausalGraph graph;        // from this scenario's execution
  double fitness = 0.0;     // d^s, lower is closer to a violation
  BinaryMatrix b_sa;
  BinaryMatrix b_sav;
  AceVector ace;
};

struct FailedTest {
  int execution_index = 0;
  ScenarioSpec scenario;
  CausalGraph graph;
  FeedbackRecord feedback;
};

struct PatternEntry {
  BinaryMatrix matrix;
  int execution_index = 0;
  ScenarioSpec scenario;
};

struct LogRow {
  int iteration = 0;          // 1-based execution index
  std::string result;         // violated | passed | error
  double ts = 0.0;
  double vd = 0.0;
  double degree = 0.0;
  double parent_degree = -1.0;  // seed's fitness; -1 for initial seeds
  std::size_t sac_size = 0;
  std::size_t savc_size = 0;
  std::size_t ft_size = 0;
  std::string admitted;       // init | ft | sac | savc | corpus | none | skipped
  double mutation_time_s = 0.0;
  double feedback_time_s = 0.0;
};

struct CampaignResult {
  std::string method;
  std::uint64_t seed = 0;
  int budget = 0;
  int initial_seeds = 0;
  int executions = 0;
  std::vector<CorpusEntry> corpus;
  std::vector<FailedTest> ft;
  std::vector<PatternEntry> sac;
  std::vector<PatternEntry> savc;
  std::vector<LogRow> log;
  int first_failure = -1;  // execution index of the first violation, -1 if none
};

// Entry with minimal fitness; ties go to the most recently added. Throws on
// an empty corpus.
std::size_t select_seed(const std::vector<CorpusEntry>& corpus);

// Per-NPC Bernoulli selection probabilities for the exploitation branch:
// ACE_k / sum ACE, falling back to uniform when every effect is zero.
std::vector<double> npc_selection_probs(const AceVector& ace,
                                        std::size_t npc_count);

// Fitness-proportionate draw over violation degrees (lower degree wins more;
// equal degrees degenerate to uniform).
std::size_t fitness_proportionate_pick(const std::vector<double>& degrees,
                                       Rng& rng);

// epsilon-greedy waypoint mutation: with probability epsilon every NPC is
// equally likely, otherwise NPC k is picked with probability ACE_k / sum ACE
// (uniform fallback when all effects are zero). At least one NPC is mutated;
// jitters are clipped, never rejected.
ScenarioSpec causal_adaptive_mutation(const CorpusEntry& seed,
                                      const AceVector& ace,
                                      const MutationConfig& cfg,
                                      double npc_max_speed, Rng& rng);

// The epsilon branch on its own (used by the baselines).
ScenarioSpec uniform_mutation(const ScenarioSpec& base,
                              const MutationConfig& cfg, double npc_max_speed,
                              Rng& rng);

// Runs the configured method. All methods share the harness: identical
// simulation, discovery, feedback, logging, and FT/SAC/SAVC bookkeeping;
// they differ in seed selection, mutation weighting, and corpus admission.
CampaignResult run_campaign(const CampaignConfig& cfg);

}  // namespace causalfuzz
