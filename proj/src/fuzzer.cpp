#include "causalfuzz/fuzzer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace causalfuzz {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Bernoulli subset draw with a redraw-until-nonempty guard.
std::vector<std::size_t> draw_nonempty_subset(const std::vector<double>& probs,
                                              Rng& rng) {
  std::vector<std::size_t> selected;
  for (int attempt = 0; attempt < 64; ++attempt) {
    selected.clear();
    for (std::size_t k = 0; k < probs.size(); ++k)
      if (rng.bernoulli(probs[k])) selected.push_back(k);
    if (!selected.empty()) return selected;
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < probs.size(); ++k)
    if (probs[k] > probs[best]) best = k;
  return {best};
}

void jitter_waypoints(ScenarioSpec& spec, const std::vector<std::size_t>& npcs,
                      const MutationConfig& cfg, double npc_max_speed,
                      Rng& rng) {
  for (const std::size_t k : npcs) {
    NpcSpec& npc = spec.npcs[k];
    std::vector<double> wp_probs(npc.waypoints.size(),
                                 cfg.waypoint_probability);
    const std::vector<std::size_t> wps = draw_nonempty_subset(wp_probs, rng);
    for (const std::size_t wi : wps) {
      NpcWaypoint& wp = npc.waypoints[wi];
      const Lane* lane = spec.map.nearest_lane(wp.position);
      const auto proj = lane->project(wp.position);
      const double s = std::clamp(
          proj.s + rng.uniform(-cfg.longitudinal_jitter, cfg.longitudinal_jitter),
          0.0, lane->length());
      const double lat_bound = lane->width * 0.5 - 0.2;
      const double lat_jitter = cfg.lateral_jitter_fraction * lane->width;
      const double lat = std::clamp(
          proj.lateral + rng.uniform(-lat_jitter, lat_jitter), -lat_bound,
          lat_bound);
      wp.position = lane->point_at(s) + lane->tangent_at(s).perp_left() * lat;
      wp.speed = std::clamp(
          wp.speed + rng.uniform(-cfg.speed_jitter, cfg.speed_jitter), 0.0,
          npc_max_speed);
    }
  }
  spec.validate(npc_max_speed);
}

// One executed-and-evaluated scenario.
struct Evaluated {
  bool error = false;
  std::string error_msg;

  static Evaluated failed(const std::string& msg) {
    Evaluated ev;
    ev.error = true;
    ev.error_msg = msg;
    return ev;
  }
  Trace trace;
  CausalGraph graph;
  BinaryMatrix b_sa;
  BinaryMatrix b_sav;
  AceVector ace;
  FeedbackRecord fb;
  double feedback_time_s = 0.0;
};

struct Harness {
  const CampaignConfig& cfg;
  std::vector<BinaryMatrix> sac_mats;
  std::vector<BinaryMatrix> savc_mats;

  Evaluated run(const ScenarioSpec& spec) const {
    Evaluated ev;
    try {
      ev.trace = simulate(spec, cfg.planner, cfg.sim);
      const auto t0 = std::chrono::steady_clock::now();
      const ScenarioMatrix x = abstract_scenario(ev.trace, cfg.abstraction);
      ev.graph = discover(x, cfg.discovery);
      ev.b_sa = subgraph_sa(ev.graph);
      ev.b_sav = ev.graph.binary;
      ev.fb = evaluate_feedback(ev.trace, spec.ego.destination, ev.b_sa,
                                ev.b_sav, sac_mats, savc_mats,
                                cfg.sim.arrival_threshold);
      ev.ace = ace_per_npc(ev.trace, ev.graph, cfg.abstraction);
      ev.feedback_time_s = seconds_since(t0);
    } catch (const std::exception& e) {
      ev.error = true;
      ev.error_msg = e.what();
    }
    return ev;
  }
};

struct Campaign {
  const CampaignConfig& cfg;
  Harness harness;
  CampaignResult result;
  Rng rng;
  std::chrono::steady_clock::time_point start_time;
  int next_id = 0;

  explicit Campaign(const CampaignConfig& c)
      : cfg(c), harness{c, {}, {}}, rng(c.seed),
        start_time(std::chrono::steady_clock::now()) {
    result.method = c.method;
    result.seed = c.seed;
    result.budget = c.budget;
  }

  bool out_of_time() const {
    return cfg.max_seconds > 0.0 && seconds_since(start_time) >= cfg.max_seconds;
  }

  CorpusEntry make_entry(const ScenarioSpec& spec, const Evaluated& ev,
                         int parent_id) {
    CorpusEntry e;
    e.id = next_id++;
    e.parent_id = parent_id;
    e.execution_index = result.executions;
    e.scenario = spec;
    e.graph = ev.graph;
    e.fitness = ev.fb.degree;
    e.b_sa = ev.b_sa;
    e.b_sav = ev.b_sav;
    e.ace = ev.ace;
    return e;
  }

  void record_failure(const ScenarioSpec& spec, const Evaluated& ev) {
    result.ft.push_back(
        {result.executions, spec, ev.graph, ev.fb});
    if (result.first_failure < 0) result.first_failure = result.executions;
    // Violation graphs define the diversity frontier: remember each distinct
    // B_sav so vd measures novelty against the failures found so far.
    add_savc_if_new(spec, ev);
  }

  void add_savc_if_new(const ScenarioSpec& spec, const Evaluated& ev) {
    for (const auto& m : harness.savc_mats)
      if (m == ev.b_sav) return;
    result.savc.push_back({ev.b_sav, result.executions, spec});
    harness.savc_mats.push_back(ev.b_sav);
  }

  void add_sac(const ScenarioSpec& spec, const Evaluated& ev) {
    result.sac.push_back({ev.b_sa, result.executions, spec});
    harness.sac_mats.push_back(ev.b_sa);
  }

  void log(const Evaluated& ev, const std::string& admitted,
           double mutation_time_s, double parent_degree = -1.0) {
    LogRow row;
    row.iteration = result.executions;
    row.result = ev.error ? "error" : (ev.fb.violated ? "violated" : "passed");
    row.ts = ev.fb.ts;
    row.vd = ev.fb.vd;
    row.degree = ev.fb.degree;
    row.parent_degree = parent_degree;
    row.sac_size = result.sac.size();
    row.savc_size = result.savc.size();
    row.ft_size = result.ft.size();
    row.admitted = admitted;
    row.mutation_time_s = mutation_time_s;
    row.feedback_time_s = ev.feedback_time_s;
    result.log.push_back(std::move(row));
  }

  // Shared FT/SAC/SAVC bookkeeping (identical across methods so the logged
  // metrics are comparable). Returns the admission label.
  std::string update_metric_sets(const ScenarioSpec& spec, const Evaluated& ev,
                                 double parent_fitness) {
    if (ev.fb.violated) {
      record_failure(spec, ev);
      return "ft";
    }
    if (ev.fb.ts >= cfg.thresholds.theta_ts && ev.fb.degree < parent_fitness) {
      add_sac(spec, ev);
      return "sac";
    }
    if (ev.fb.vd > cfg.thresholds.theta_vd) {
      add_savc_if_new(spec, ev);
      return "savc";
    }
    return "none";
  }

  void initialize(int seed_count) {
    result.initial_seeds = seed_count;
    for (int i = 0; i < seed_count; ++i) {
      const ScenarioSpec spec = generate_scenario(cfg.archetype, rng);
      ++result.executions;
      const Evaluated ev = harness.run(spec);
      if (ev.error) {
        log(ev, "skipped", 0.0);
        continue;
      }
      std::string admitted = "init";
      if (ev.fb.violated) {
        record_failure(spec, ev);
        admitted = "ft";
      }
      result.corpus.push_back(make_entry(spec, ev, -1));
      log(ev, admitted, 0.0);
    }
    if (result.corpus.empty())
      throw std::runtime_error("campaign: no viable initial seeds");
  }

  void run_causal() {
    initialize(cfg.archetype.initial_seeds);
    for (int it = 0; it < cfg.budget && !out_of_time(); ++it) {
      const std::size_t seed_idx = select_seed(result.corpus);
      const CorpusEntry seed = result.corpus[seed_idx];
      const auto t0 = std::chrono::steady_clock::now();
      ScenarioSpec mutant;
      try {
        mutant = causal_adaptive_mutation(seed, seed.ace, cfg.mutation,
                                          cfg.sim.npc_max_speed, rng);
      } catch (const std::exception& e) {
        ++result.executions;
        log(Evaluated::failed(e.what()), "skipped", seconds_since(t0));
        continue;
      }
      const double mutation_time = seconds_since(t0);
      ++result.executions;
      const Evaluated ev = harness.run(mutant);
      if (ev.error) {
        log(ev, "skipped", mutation_time);
        continue;
      }
      const std::string admitted =
          update_metric_sets(mutant, ev, seed.fitness);
      if (admitted != "none")
        result.corpus.push_back(make_entry(mutant, ev, seed.id));
      log(ev, admitted, mutation_time, seed.fitness);
    }
  }

  void run_random() {
    initialize(cfg.archetype.initial_seeds);
    for (int it = 0; it < cfg.budget && !out_of_time(); ++it) {
      const std::size_t seed_idx = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<int>(result.corpus.size()) - 1));
      const CorpusEntry seed = result.corpus[seed_idx];
      const auto t0 = std::chrono::steady_clock::now();
      ScenarioSpec mutant;
      try {
        mutant = uniform_mutation(seed.scenario, cfg.mutation,
                                  cfg.sim.npc_max_speed, rng);
      } catch (const std::exception& e) {
        ++result.executions;
        log(Evaluated::failed(e.what()), "skipped", seconds_since(t0));
        continue;
      }
      const double mutation_time = seconds_since(t0);
      ++result.executions;
      const Evaluated ev = harness.run(mutant);
      if (ev.error) {
        log(ev, "skipped", mutation_time);
        continue;
      }
      // Metric sets update as usual; admission to the corpus is unconditional.
      std::string admitted = update_metric_sets(mutant, ev, seed.fitness);
      if (admitted == "none") admitted = "corpus";
      result.corpus.push_back(make_entry(mutant, ev, seed.id));
      log(ev, admitted, mutation_time, seed.fitness);
    }
  }

  std::size_t select_parent_proportionate(
      const std::vector<std::size_t>& population) {
    std::vector<double> degrees(population.size());
    for (std::size_t i = 0; i < population.size(); ++i)
      degrees[i] = result.corpus[population[i]].fitness;
    return population[fitness_proportionate_pick(degrees, rng)];
  }

  void run_ga() {
    const int pop_size = std::max(cfg.ga.population, 1);
    initialize(pop_size);
    std::vector<std::size_t> population;
    for (std::size_t i = 0; i < result.corpus.size(); ++i) population.push_back(i);

    int executed = 0;
    while (executed < cfg.budget && !out_of_time()) {
      std::vector<std::size_t> next_gen;
      for (int i = 0; i < pop_size && executed < cfg.budget && !out_of_time();
           ++i) {
        const std::size_t parent_idx = select_parent_proportionate(population);
        const CorpusEntry parent = result.corpus[parent_idx];
        const auto t0 = std::chrono::steady_clock::now();
        ScenarioSpec child;
        try {
          child = uniform_mutation(parent.scenario, cfg.mutation,
                                   cfg.sim.npc_max_speed, rng);
        } catch (const std::exception& e) {
          ++executed;
          ++result.executions;
          log(Evaluated::failed(e.what()), "skipped", seconds_since(t0));
          continue;
        }
        const double mutation_time = seconds_since(t0);
        ++executed;
        ++result.executions;
        const Evaluated ev = harness.run(child);
        if (ev.error) {
          log(ev, "skipped", mutation_time);
          continue;
        }
        std::string admitted = update_metric_sets(child, ev, parent.fitness);
        if (admitted == "none") admitted = "corpus";
        result.corpus.push_back(make_entry(child, ev, parent.id));
        next_gen.push_back(result.corpus.size() - 1);
        log(ev, admitted, mutation_time, parent.fitness);
      }
      if (!next_gen.empty()) population = std::move(next_gen);
    }
  }
};

}  // namespace

void MutationConfig::validate() const {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("mutation: epsilon must be in [0, 1]");
  if (longitudinal_jitter <= 0.0 || lateral_jitter_fraction <= 0.0 ||
      speed_jitter <= 0.0)
    throw std::invalid_argument("mutation: jitter bounds must be positive");
  if (waypoint_probability <= 0.0 || waypoint_probability > 1.0)
    throw std::invalid_argument("mutation: waypoint_probability in (0, 1]");
}

void CampaignConfig::validate() const {
  if (method != "causal" && method != "random" && method != "ga")
    throw std::invalid_argument("campaign: unknown method '" + method + "'");
  if (budget < 0) throw std::invalid_argument("campaign: budget must be >= 0");
  if (thresholds.theta_ts < 0.0 || thresholds.theta_ts > 1.0 ||
      thresholds.theta_vd < 0.0 || thresholds.theta_vd > 1.0)
    throw std::invalid_argument("campaign: thresholds must be in [0, 1]");
  archetype.validate();
  planner.validate();
  abstraction.validate();
  mutation.validate();
  if (ga.population < 1)
    throw std::invalid_argument("campaign: ga population must be >= 1");
}

std::size_t select_seed(const std::vector<CorpusEntry>& corpus) {
  if (corpus.empty()) throw std::runtime_error("select_seed: empty corpus");
  std::size_t best = 0;
  for (std::size_t i = 1; i < corpus.size(); ++i) {
    if (corpus[i].fitness <= corpus[best].fitness) best = i;
  }
  return best;
}

std::vector<double> npc_selection_probs(const AceVector& ace,
                                        std::size_t npc_count) {
  std::vector<double> probs(npc_count, 1.0 / static_cast<double>(npc_count));
  double total = 0.0;
  for (std::size_t k = 0; k < npc_count && k < ace.values.size(); ++k)
    total += ace.values[k];
  if (total > 0.0) {
    for (std::size_t k = 0; k < npc_count; ++k)
      probs[k] = k < ace.values.size() ? ace.values[k] / total : 0.0;
  }
  return probs;
}

std::size_t fitness_proportionate_pick(const std::vector<double>& degrees,
                                       Rng& rng) {
  double d_max = 0.0;
  for (const double d : degrees) d_max = std::max(d_max, d);
  std::vector<double> weights(degrees.size());
  double total = 0.0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    weights[i] = (d_max - degrees[i]) + 1e-3;
    total += weights[i];
  }
  double r = rng.uniform(0.0, total);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    r -= weights[i];
    if (r <= 0.0) return i;
  }
  return weights.size() - 1;
}

ScenarioSpec causal_adaptive_mutation(const CorpusEntry& seed,
                                      const AceVector& ace,
                                      const MutationConfig& cfg,
                                      double npc_max_speed, Rng& rng) {
  cfg.validate();
  const std::size_t n = seed.scenario.npcs.size();
  if (n == 0) throw std::invalid_argument("mutation: seed has no NPCs");

  std::vector<double> probs(n, 1.0 / static_cast<double>(n));
  if (rng.uniform01() >= cfg.epsilon) probs = npc_selection_probs(ace, n);

  ScenarioSpec mutant = seed.scenario;
  const std::vector<std::size_t> selected = draw_nonempty_subset(probs, rng);
  jitter_waypoints(mutant, selected, cfg, npc_max_speed, rng);
  return mutant;
}

ScenarioSpec uniform_mutation(const ScenarioSpec& base,
                              const MutationConfig& cfg, double npc_max_speed,
                              Rng& rng) {
  cfg.validate();
  const std::size_t n = base.npcs.size();
  if (n == 0) throw std::invalid_argument("mutation: scenario has no NPCs");
  std::vector<double> probs(n, 1.0 / static_cast<double>(n));
  ScenarioSpec mutant = base;
  const std::vector<std::size_t> selected = draw_nonempty_subset(probs, rng);
  jitter_waypoints(mutant, selected, cfg, npc_max_speed, rng);
  return mutant;
}

CampaignResult run_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  Campaign campaign(cfg);
  if (cfg.method == "causal") {
    campaign.run_causal();
  } else if (cfg.method == "random") {
    campaign.run_random();
  } else {
    campaign.run_ga();
  }
  return campaign.result;
}

}  // namespace causalfuzz
