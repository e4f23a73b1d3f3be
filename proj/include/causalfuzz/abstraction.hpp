#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "causalfuzz/linalg.hpp"
#include "causalfuzz/scenario.hpp"
#include "causalfuzz/vehicle.hpp"

namespace causalfuzz {

struct AbstractionConfig {
  int sectors = 8;                  // m
  int rings = 4;                    // n
  double perception_range = 50.0;   // L, meters
  double accel_threshold = 0.1;     // theta_a+, m/s^2
  double decel_threshold = -0.1;    // theta_a-, m/s^2
  double heading_threshold = 0.1;   // theta_h, rad per sample
  int stride = 1;                   // sampling stride in steps

  int cell_count() const { return sectors * rings; }
  void validate() const;
};

// Binary occupancy of the m*n perception cells; cell(i, j) = i*rings + j for
// sector i (counterclockwise from the ego's right) and ring j (inner first).
using SceneVector = std::vector<std::uint8_t>;

// [accelerate, decelerate, turn-left, turn-right, maintain]
using ActionVector = std::array<std::uint8_t, 5>;

// [ego-fault collision, npc-fault collision]
using ViolationVector = std::array<std::uint8_t, 2>;

struct VariableBlocks {
  int scene = 0;
  int action = 0;
  int violation = 0;
  int total() const { return scene + action + violation; }
};

// The vectorized scenario X: one row per abstracted variable, one column per
// sampled time instant, entries in {0, 1}.
struct ScenarioMatrix {
  Matrix values;
  std::vector<std::string> labels;
  VariableBlocks blocks;
};

SceneVector abstract_scene(const VehicleState& ego,
                           const std::vector<VehicleState>& npcs,
                           const AbstractionConfig& cfg);

// prev == nullptr encodes t = 0, which abstracts to all zeros.
ActionVector abstract_action(const VehicleState* prev, const VehicleState& cur,
                             const AbstractionConfig& cfg);

ViolationVector abstract_violation(const TraceStep& step);

// Column-per-instant concatenation of [scene; action; violation]. Samples
// every `stride` steps counted back from the final step, so the final step is
// always included and the column count is ceil(t_s / stride). Throws when
// fewer than two instants would be sampled.
ScenarioMatrix abstract_scenario(const Trace& trace,
                                 const AbstractionConfig& cfg);

// The sampled step indices (0-based into trace.steps) used by
// abstract_scenario, exposed so per-NPC effect estimation sees the same
// instants.
std::vector<std::size_t> sampled_steps(std::size_t step_count, int stride);

// Scene vector with the NPC list reduced to NPC k.
SceneVector scene_vector_of_npc(const TraceStep& step, std::size_t npc_index,
                                const AbstractionConfig& cfg);

std::vector<std::string> variable_labels(const AbstractionConfig& cfg);

}  // namespace causalfuzz
