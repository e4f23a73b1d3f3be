#pragma once

#include <string>

#include "causalfuzz/rng.hpp"
#include "causalfuzz/scenario.hpp"

namespace causalfuzz {

// The four built-in functional scenario families: straight-road lane
// following, straight-road lane changing, and crossing an unsignalized
// intersection straight or by a left turn.
struct ArchetypeConfig {
  std::string name = "lane-follow";  // lane-follow | lane-change |
                                     // intersection-straight | intersection-left
  int npc_count = 3;
  double speed_min = 5.0;    // m/s, NPC target speed range
  double speed_max = 12.0;
  double spawn_min = 25.0;   // m, spawn window along the NPC's lane
  double spawn_max = 130.0;
  int initial_seeds = 4;
  double duration_limit = 45.0;  // s
  double dt = 0.1;               // s

  void validate() const;
};

MapSpec build_archetype_map(const std::string& name);

// Ego task is fixed per archetype; NPC placement comes from rng so initial
// corpora are reproducible from the campaign seed.
ScenarioSpec generate_scenario(const ArchetypeConfig& cfg, Rng& rng);

}  // namespace causalfuzz
