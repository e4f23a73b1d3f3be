#pragma once

#include "causalfuzz/planner.hpp"
#include "causalfuzz/scenario.hpp"

namespace causalfuzz {

struct SimOptions {
  double arrival_threshold = 1.0;   // theta_p, meters
  double npc_max_speed = 20.0;      // m/s, validation bound
  int lane_cross_memory = 20;       // steps of lane-crossing history (K)
};

struct FaultInput {
  VehicleState ego;
  VehicleState npc;
  bool ego_crossed_lane_recently = false;
};

// Exactly one of (f_e, f_n) is set. Ego is at fault when it crossed a lane
// boundary within the last K steps, or when the contact lies in its front
// half while it is the faster vehicle.
struct FaultResult {
  int fault_ego = 0;
  int fault_npc = 0;
};
FaultResult attribute_fault(const FaultInput& in);

// Deterministic discrete-time execution of a scenario: identical inputs give
// a bit-identical trace. Ends at collision, arrival within theta_p, or the
// duration limit. Throws std::invalid_argument on an invalid spec.
Trace simulate(const ScenarioSpec& spec, const PlannerConfig& planner_cfg,
               const SimOptions& options = {});

}  // namespace causalfuzz
