#pragma once

#include <string>
#include <vector>

#include "causalfuzz/geometry.hpp"
#include "causalfuzz/map.hpp"
#include "causalfuzz/vehicle.hpp"

namespace causalfuzz {

struct NpcWaypoint {
  Vec2 position;      // meters, must lie on the map
  double speed = 0.0; // target speed, m/s
};

struct NpcSpec {
  std::vector<NpcWaypoint> waypoints;  // >= 2
  double length = 4.6;
  double width = 2.0;
};

struct EgoSpec {
  Vec2 start_position;
  double start_heading = 0.0;
  double start_speed = 0.0;
  Vec2 destination;
  std::vector<std::string> route;  // lane ids, in driving order
  double length = 4.6;
  double width = 2.0;
};

// The mutable genotype: map, ego task, and the NPC waypoint lists the fuzzer
// perturbs.
struct ScenarioSpec {
  MapSpec map;
  EgoSpec ego;
  std::vector<NpcSpec> npcs;
  double duration_limit = 30.0;  // seconds
  double dt = 0.1;               // seconds

  // Throws std::invalid_argument on broken invariants (off-map waypoints,
  // empty route, speed bounds, ...).
  void validate(double npc_max_speed = 20.0) const;
};

enum class TerminalReason { Arrival, Collision, Timeout };

struct TraceStep {
  VehicleState ego;
  std::vector<VehicleState> npcs;
  bool collision = false;
  int fault_ego = 0;       // f_e
  int fault_npc = 0;       // f_n
  int colliding_npc = -1;  // index into npcs, -1 when no collision
};

// Observation of one execution: per-step snapshots for t = 1..t_s plus the
// terminal bookkeeping the oracle needs.
struct Trace {
  double dt = 0.1;
  Vec2 destination;
  std::vector<TraceStep> steps;
  TerminalReason terminal = TerminalReason::Timeout;
  double min_bb_distance = 0.0;  // over the whole run, ego vs any NPC

  const Vec2& final_ego_position() const { return steps.back().ego.position; }
};

}  // namespace causalfuzz
