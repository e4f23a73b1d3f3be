#include "causalfuzz/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace causalfuzz {

namespace {

struct NpcRuntime {
  std::size_t wp_index = 1;
  bool cruising = false;  // past the final waypoint
};

Command npc_control(const VehicleState& state, const NpcSpec& spec,
                    NpcRuntime& rt) {
  if (rt.cruising) {
    const double target = spec.waypoints.back().speed;
    return {std::clamp(1.2 * (target - state.speed), -4.5, 3.0), 0.0};
  }

  // Advance past captured or overshot waypoints.
  const Vec2 fwd{std::cos(state.heading), std::sin(state.heading)};
  while (rt.wp_index < spec.waypoints.size()) {
    const Vec2 to_wp = spec.waypoints[rt.wp_index].position - state.position;
    const double d = to_wp.norm();
    const double capture = std::max(3.0, 0.8 * state.speed);
    const bool behind = to_wp.dot(fwd) < 0.0 && d < 6.0;
    if (d < capture || behind) {
      ++rt.wp_index;
    } else {
      break;
    }
  }
  if (rt.wp_index >= spec.waypoints.size()) {
    rt.cruising = true;
    return npc_control(state, spec, rt);
  }

  const NpcWaypoint& wp = spec.waypoints[rt.wp_index];
  const Vec2 to_wp = wp.position - state.position;
  const double dist = std::max(to_wp.norm(), 1.0);
  const double alpha =
      wrap_angle_signed(std::atan2(to_wp.y, to_wp.x) - state.heading);
  const double wheelbase = std::max(0.5, 0.6 * state.length);
  const double steer =
      std::clamp(std::atan2(2.0 * wheelbase * std::sin(alpha), dist), -0.6, 0.6);
  const double accel = std::clamp(1.2 * (wp.speed - state.speed), -4.5, 3.0);
  return {accel, steer};
}

double initial_heading(const NpcSpec& spec, const MapSpec& map) {
  const Vec2 d = spec.waypoints[1].position - spec.waypoints[0].position;
  if (d.norm() > 1e-9) return wrap_angle_2pi(std::atan2(d.y, d.x));
  const Lane* lane = map.nearest_lane(spec.waypoints.front().position);
  if (!lane) return 0.0;
  return wrap_angle_2pi(
      lane->heading_at(lane->project(spec.waypoints.front().position).s));
}

}  // namespace

FaultResult attribute_fault(const FaultInput& in) {
  const Vec2 local =
      to_local_frame(in.npc.position, in.ego.position, in.ego.heading);
  const bool front_half = local.y > 0.0;
  const bool ego_fault =
      in.ego_crossed_lane_recently || (front_half && in.ego.speed > in.npc.speed);
  return ego_fault ? FaultResult{1, 0} : FaultResult{0, 1};
}

Trace simulate(const ScenarioSpec& spec, const PlannerConfig& planner_cfg,
               const SimOptions& options) {
  ScenarioSpec run = spec;
  run.map.build_index();
  run.validate(options.npc_max_speed);

  Trace trace;
  trace.dt = run.dt;
  trace.destination = run.ego.destination;
  trace.min_bb_distance = std::numeric_limits<double>::infinity();

  VehicleState ego;
  ego.position = run.ego.start_position;
  ego.heading = wrap_angle_2pi(run.ego.start_heading);
  ego.speed = run.ego.start_speed;
  ego.length = run.ego.length;
  ego.width = run.ego.width;

  std::vector<VehicleState> npcs(run.npcs.size());
  std::vector<NpcRuntime> npc_rt(run.npcs.size());
  for (std::size_t k = 0; k < run.npcs.size(); ++k) {
    npcs[k].position = run.npcs[k].waypoints.front().position;
    npcs[k].heading = initial_heading(run.npcs[k], run.map);
    npcs[k].speed = run.npcs[k].waypoints.front().speed;
    npcs[k].length = run.npcs[k].length;
    npcs[k].width = run.npcs[k].width;
  }

  bool on_route_lane = false;
  for (const auto& id : run.ego.route) {
    const Lane* lane = run.map.find(id);
    if (lane &&
        lane->project(ego.position).distance <= lane->width * 0.5 + 1.0)
      on_route_lane = true;
  }
  if (!on_route_lane)
    throw std::invalid_argument("scenario: ego start not on a route lane");

  EgoPlanner planner(run.map, run.ego.route, run.ego.destination, planner_cfg,
                     run.dt);

  const Lane* start_lane = run.map.nearest_lane_aligned(ego.position, ego.heading);
  std::string prev_lane_id = start_lane ? start_lane->id : "";
  int last_crossing_step = std::numeric_limits<int>::min() / 2;

  const int max_steps =
      static_cast<int>(std::floor(run.duration_limit / run.dt + 1e-9));

  for (int t = 1; t <= max_steps; ++t) {
    // Commands from the previous snapshot; all vehicles update synchronously.
    const Command ego_cmd = planner.plan(ego, npcs);
    std::vector<Command> npc_cmds(npcs.size());
    for (std::size_t k = 0; k < npcs.size(); ++k)
      npc_cmds[k] = npc_control(npcs[k], run.npcs[k], npc_rt[k]);

    ego = step_kinematics(ego, ego_cmd, run.dt);
    for (std::size_t k = 0; k < npcs.size(); ++k)
      npcs[k] = step_kinematics(npcs[k], npc_cmds[k], run.dt);

    const Lane* lane = run.map.nearest_lane_aligned(ego.position, ego.heading);
    const std::string lane_id = lane ? lane->id : "";
    if (lane_id != prev_lane_id) last_crossing_step = t;
    prev_lane_id = lane_id;

    TraceStep step;
    step.ego = ego;
    step.npcs = npcs;

    const Obb ego_box = bounding_box(ego);
    int hit = -1;
    for (std::size_t k = 0; k < npcs.size(); ++k) {
      const double d = min_bb_distance(ego_box, bounding_box(npcs[k]));
      trace.min_bb_distance = std::min(trace.min_bb_distance, d);
      if (d == 0.0 && hit < 0) hit = static_cast<int>(k);
    }

    if (hit >= 0) {
      step.collision = true;
      step.colliding_npc = hit;
      FaultInput fi;
      fi.ego = ego;
      fi.npc = npcs[static_cast<std::size_t>(hit)];
      fi.ego_crossed_lane_recently =
          (t - last_crossing_step) <= options.lane_cross_memory;
      const FaultResult fault = attribute_fault(fi);
      step.fault_ego = fault.fault_ego;
      step.fault_npc = fault.fault_npc;
      trace.steps.push_back(std::move(step));
      trace.terminal = TerminalReason::Collision;
      return trace;
    }

    trace.steps.push_back(std::move(step));

    if (distance(ego.position, run.ego.destination) <=
        options.arrival_threshold) {
      trace.terminal = TerminalReason::Arrival;
      return trace;
    }
  }

  trace.terminal = TerminalReason::Timeout;
  return trace;
}

}  // namespace causalfuzz
