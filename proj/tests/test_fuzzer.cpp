#include "doctest.h"

#include <cmath>
#include <set>

#include "causalfuzz/fuzzer.hpp"
#include "causalfuzz/serialization.hpp"

using namespace causalfuzz;

namespace {

CorpusEntry entry_with_fitness(double fitness, int id = 0) {
  CorpusEntry e;
  e.id = id;
  e.fitness = fitness;
  return e;
}

CampaignConfig small_config(const std::string& method, std::uint64_t seed,
                            int budget) {
  CampaignConfig cfg;
  cfg.method = method;
  cfg.seed = seed;
  cfg.budget = budget;
  cfg.archetype.name = "lane-follow";
  cfg.archetype.npc_count = 3;
  cfg.archetype.initial_seeds = 3;
  cfg.archetype.duration_limit = 20.0;
  cfg.ga.population = 3;
  return cfg;
}

}  // namespace

TEST_CASE("seed selection takes the best fitness, ties to the newest") {
  std::vector<CorpusEntry> corpus = {entry_with_fitness(14.5, 0),
                                     entry_with_fitness(2.0, 1),
                                     entry_with_fitness(9.0, 2)};
  CHECK(select_seed(corpus) == 1);
  corpus.push_back(entry_with_fitness(2.0, 3));
  CHECK(select_seed(corpus) == 3);
  corpus = {entry_with_fitness(7.0, 0)};
  CHECK(select_seed(corpus) == 0);
  corpus.clear();
  CHECK_THROWS(select_seed(corpus));
}

TEST_CASE("ACE normalization gives the adaptive selection probabilities") {
  AceVector ace;
  ace.values = {0.04, 0.73};
  const auto probs = npc_selection_probs(ace, 2);
  CHECK(std::abs(probs[0] - 0.052) < 1e-3);
  CHECK(std::abs(probs[1] - 0.948) < 1e-3);

  AceVector zeros;
  zeros.values = {0.0, 0.0};
  const auto uniform = npc_selection_probs(zeros, 2);
  CHECK(uniform[0] == doctest::Approx(0.5));
  CHECK(uniform[1] == doctest::Approx(0.5));
}

TEST_CASE("epsilon = 1 mutates every NPC with the same frequency") {
  ArchetypeConfig arch;
  arch.npc_count = 3;
  Rng gen(17);
  const ScenarioSpec base = generate_scenario(arch, gen);

  CorpusEntry seed;
  seed.scenario = base;
  AceVector ace;
  ace.values = {0.9, 0.05, 0.05};  // must be ignored at epsilon = 1

  MutationConfig cfg;
  cfg.epsilon = 1.0;
  Rng rng(18);
  std::array<long, 3> counts{0, 0, 0};
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const ScenarioSpec mutant = causal_adaptive_mutation(seed, ace, cfg, 20.0, rng);
    for (std::size_t k = 0; k < 3; ++k) {
      bool differs = false;
      for (std::size_t w = 0; w < base.npcs[k].waypoints.size(); ++w) {
        if (mutant.npcs[k].waypoints[w].position.x !=
                base.npcs[k].waypoints[w].position.x ||
            mutant.npcs[k].waypoints[w].speed != base.npcs[k].waypoints[w].speed)
          differs = true;
      }
      if (differs) ++counts[k];
    }
  }
  const double total = static_cast<double>(counts[0] + counts[1] + counts[2]);
  const double expected = total / 3.0;
  double chi2 = 0.0;
  for (const long c : counts)
    chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 13.82);  // df = 2 at alpha = 0.001
}

TEST_CASE("mutants always differ, stay valid, and respect speed bounds") {
  ArchetypeConfig arch;
  arch.npc_count = 2;
  Rng gen(21);
  CorpusEntry seed;
  seed.scenario = generate_scenario(arch, gen);
  AceVector ace;
  ace.values = {0.3, 0.7};
  MutationConfig cfg;
  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    const ScenarioSpec mutant =
        causal_adaptive_mutation(seed, ace, cfg, 20.0, rng);
    mutant.validate(20.0);
    bool any_diff = false;
    for (std::size_t k = 0; k < mutant.npcs.size(); ++k)
      for (std::size_t w = 0; w < mutant.npcs[k].waypoints.size(); ++w) {
        const auto& a = mutant.npcs[k].waypoints[w];
        const auto& b = seed.scenario.npcs[k].waypoints[w];
        CHECK(a.speed >= 0.0);
        CHECK(a.speed <= 20.0);
        if (a.position.x != b.position.x || a.position.y != b.position.y ||
            a.speed != b.speed)
          any_diff = true;
      }
    CHECK(any_diff);
  }
}

TEST_CASE("fitness-proportionate pick prefers the lowest degree") {
  Rng rng(23);
  const std::vector<double> degrees = {1.0, 5.0, 9.0};
  std::array<long, 3> counts{0, 0, 0};
  for (int i = 0; i < 10000; ++i) ++counts[fitness_proportionate_pick(degrees, rng)];
  CHECK(counts[0] > counts[1]);
  CHECK(counts[1] > counts[2]);

  const std::vector<double> clones = {4.0, 4.0, 4.0};
  std::array<long, 3> flat{0, 0, 0};
  for (int i = 0; i < 9000; ++i) ++flat[fitness_proportionate_pick(clones, rng)];
  for (const long c : flat) CHECK(std::abs(c - 3000.0) < 300.0);
}

TEST_CASE("budget 0 returns the initialized state") {
  const CampaignConfig cfg = small_config("causal", 5, 0);
  const CampaignResult r = run_campaign(cfg);
  CHECK(r.executions == cfg.archetype.initial_seeds);
  CHECK(r.log.size() == static_cast<std::size_t>(cfg.archetype.initial_seeds));
  std::size_t violated = 0;
  for (const LogRow& row : r.log)
    if (row.result == "violated") ++violated;
  CHECK(r.ft.size() == violated);
  CHECK(r.sac.empty());
}

TEST_CASE("campaigns are reproducible and keep their invariants") {
  for (const char* method : {"causal", "random", "ga"}) {
    const CampaignConfig cfg = small_config(method, 99, 12);
    const CampaignResult a = run_campaign(cfg);
    const CampaignResult b = run_campaign(cfg);
    CHECK(summary_to_json(a).dump() == summary_to_json(b).dump());
    REQUIRE(a.log.size() == b.log.size());
    for (std::size_t i = 0; i < a.log.size(); ++i) {
      CHECK(a.log[i].result == b.log[i].result);
      CHECK(a.log[i].degree == b.log[i].degree);
      CHECK(a.log[i].admitted == b.log[i].admitted);
    }

    // Monotone growth of the logged set sizes.
    std::size_t sac = 0, savc = 0, ft = 0;
    for (const LogRow& row : a.log) {
      CHECK(row.sac_size >= sac);
      CHECK(row.savc_size >= savc);
      CHECK(row.ft_size >= ft);
      sac = row.sac_size;
      savc = row.savc_size;
      ft = row.ft_size;
    }
    CHECK(a.executions == cfg.archetype.initial_seeds + cfg.budget);
  }
}

TEST_CASE("SAC members stay pairwise distant, SAVC members distinct") {
  CampaignConfig cfg = small_config("causal", 1234, 40);
  const CampaignResult r = run_campaign(cfg);
  for (std::size_t i = 0; i < r.sac.size(); ++i)
    for (std::size_t j = i + 1; j < r.sac.size(); ++j)
      CHECK(graph_distance(r.sac[i].matrix, r.sac[j].matrix) >=
            cfg.thresholds.theta_ts - 1e-12);
  for (std::size_t i = 0; i < r.savc.size(); ++i)
    for (std::size_t j = i + 1; j < r.savc.size(); ++j)
      CHECK_FALSE(r.savc[i].matrix == r.savc[j].matrix);
  // Admission evidence in the log: SAC rows satisfied both conditions.
  for (const LogRow& row : r.log) {
    if (row.admitted == "sac") {
      CHECK(row.ts >= cfg.thresholds.theta_ts);
      CHECK(row.degree < row.parent_degree);
    }
    if (row.admitted == "savc" && row.result == "passed")
      CHECK(row.vd > cfg.thresholds.theta_vd);
  }
  // Every failed test comes from a violated execution.
  for (const FailedTest& ft : r.ft) {
    CHECK(ft.feedback.violated);
    const Trace replayed = simulate(ft.scenario, cfg.planner, cfg.sim);
    CHECK(oracle(replayed, ft.scenario.ego.destination,
                 cfg.sim.arrival_threshold) == OracleResult::Violated);
  }
}

TEST_CASE("wall-clock budget caps the loop when enabled") {
  CampaignConfig cfg = small_config("causal", 3, 100000);
  cfg.max_seconds = 0.5;
  const CampaignResult r = run_campaign(cfg);
  CHECK(r.executions < 100000 + cfg.archetype.initial_seeds);
  CHECK(r.executions >= cfg.archetype.initial_seeds);
}
