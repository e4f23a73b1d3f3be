#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causalfuzz/map.hpp"
#include "causalfuzz/scenario.hpp"
#include "causalfuzz/vehicle.hpp"

namespace causalfuzz {

struct PlannerConfig {
  double desired_speed = 13.0;          // m/s
  double time_headway = 1.5;            // s
  double min_gap = 2.0;                 // m
  double max_accel = 2.5;               // m/s^2
  double comfort_decel = 3.0;           // m/s^2
  double max_decel = 6.0;               // m/s^2, physical braking limit
  double lane_change_trigger_gap = 25.0;  // m
  double safe_gap_front = 15.0;         // m
  double safe_gap_rear = 10.0;          // m
  double lookahead = 50.0;              // m, perception radius
  double max_steer = 0.5;               // rad
  double pursuit_gain = 0.9;            // lookahead seconds per m/s
  double pursuit_min = 4.0;             // m
  double pursuit_max = 18.0;            // m
  double lane_change_cooldown = 3.0;    // s

  void validate() const;
};

// Deterministic rule-based driving policy: IDM longitudinal control against
// the nearest same-lane leader, pure-pursuit lane tracking, gap-acceptance
// lane changes, a yield heuristic at unsignalized lane crossings, and a
// stop-at-destination behavior. Only NPCs within `lookahead` of the ego
// influence the command.
class EgoPlanner {
 public:
  EgoPlanner(const MapSpec& map, std::vector<std::string> route,
             Vec2 destination, const PlannerConfig& cfg, double dt);

  Command plan(const VehicleState& ego, const std::vector<VehicleState>& npcs);

  const std::string& current_lane_id() const { return current_lane_; }
  bool changing_lane() const { return changing_to_.has_value(); }

 private:
  struct Conflict {
    double route_s = 0.0;     // arc length of the crossing along the route
    std::string other_lane;
    double other_s = 0.0;     // arc length along the crossing lane
  };

  double idm_accel(double v, double gap, double leader_speed) const;
  double yield_accel(const VehicleState& ego, double ego_s,
                     const std::vector<const VehicleState*>& npcs) const;

  const MapSpec* map_;
  std::vector<std::string> route_;
  Vec2 destination_;
  PlannerConfig cfg_;
  double dt_;
  std::vector<std::string> tracked_;  // lane chain currently followed
  std::string current_lane_;
  std::optional<std::string> changing_to_;
  double cooldown_ = 0.0;
  std::vector<Conflict> conflicts_;
};

}  // namespace causalfuzz
