#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "causalfuzz/archetypes.hpp"
#include "causalfuzz/planner.hpp"
#include "causalfuzz/simulator.hpp"

using namespace causalfuzz;

namespace {

VehicleState ego_at(Vec2 pos, double speed) {
  VehicleState s;
  s.position = pos;
  s.heading = 0.0;
  s.speed = speed;
  return s;
}

VehicleState npc_at(Vec2 pos, double speed, double heading = 0.0) {
  VehicleState s;
  s.position = pos;
  s.heading = heading;
  s.speed = speed;
  return s;
}

}  // namespace

TEST_CASE("free road: accelerate toward desired speed, go straight") {
  const MapSpec map = build_archetype_map("lane-follow");
  PlannerConfig cfg;
  EgoPlanner planner(map, {"e0"}, {300, -1.75}, cfg, 0.1);
  const Command cmd = planner.plan(ego_at({50, -1.75}, 5.0), {});
  CHECK(cmd.accel > 0.0);
  CHECK(std::abs(cmd.steer) < 1e-9);

  EgoPlanner cruising(map, {"e0"}, {300, -1.75}, cfg, 0.1);
  const Command at_speed = cruising.plan(ego_at({50, -1.75}, cfg.desired_speed), {});
  CHECK(std::abs(at_speed.accel) < 1e-9);
}

TEST_CASE("stationary leader close ahead forces hard braking") {
  const MapSpec map = build_archetype_map("lane-follow");
  PlannerConfig cfg;
  EgoPlanner planner(map, {"e0"}, {300, -1.75}, cfg, 0.1);
  const VehicleState ego = ego_at({50, -1.75}, cfg.desired_speed);
  // Bumper gap of 5 m: centers 5 + (4.6 + 4.6)/2 apart.
  const VehicleState leader = npc_at({50 + 5.0 + 4.6, -1.75}, 0.0);
  const Command cmd = planner.plan(ego, {leader});
  CHECK(cmd.accel <= -cfg.comfort_decel);
}

TEST_CASE("blocked leader and a clear adjacent lane: lane change within 5 s") {
  ArchetypeConfig arch;
  arch.name = "lane-change";
  const MapSpec map = build_archetype_map(arch.name);

  ScenarioSpec spec;
  spec.map = map;
  spec.ego.start_position = {20, 0};
  spec.ego.start_heading = 0.0;
  spec.ego.start_speed = 10.0;
  spec.ego.destination = {300, 0};
  spec.ego.route = {"l0"};
  spec.duration_limit = 30.0;
  spec.dt = 0.1;
  NpcSpec slow;
  slow.waypoints = {{{55, 0}, 2.0}, {{120, 0}, 2.0}, {{200, 0}, 2.0}};
  spec.npcs.push_back(slow);

  const Trace trace = simulate(spec, PlannerConfig{});
  bool changed = false;
  const std::size_t five_seconds = 50;
  for (std::size_t i = 0; i < trace.steps.size() && i < five_seconds; ++i) {
    const Lane* lane = spec.map.nearest_lane_aligned(
        trace.steps[i].ego.position, trace.steps[i].ego.heading);
    if (lane && lane->id == "l1") {
      changed = true;
      break;
    }
  }
  CHECK(changed);
  CHECK(trace.min_bb_distance > 0.0);
}

TEST_CASE("commands stay within configured bounds") {
  const MapSpec map = build_archetype_map("lane-follow");
  PlannerConfig cfg;
  EgoPlanner planner(map, {"e0"}, {300, -1.75}, cfg, 0.1);
  Rng rng(9);
  for (int i = 0; i < 500; ++i) {
    const VehicleState ego =
        ego_at({rng.uniform(10, 350), -1.75}, rng.uniform(0, 15));
    std::vector<VehicleState> npcs;
    const int n = rng.uniform_int(0, 4);
    for (int k = 0; k < n; ++k)
      npcs.push_back(npc_at({rng.uniform(10, 350), rng.uniform(-6, 6)},
                            rng.uniform(0, 15), rng.uniform(0, 6.28)));
    const Command cmd = planner.plan(ego, npcs);
    CHECK(cmd.accel <= cfg.max_accel + 1e-12);
    CHECK(cmd.accel >= -cfg.max_decel - 1e-12);
    CHECK(std::abs(cmd.steer) <= cfg.max_steer + 1e-12);
  }
}

TEST_CASE("NPCs beyond the perception radius do not affect the command") {
  const MapSpec map = build_archetype_map("lane-follow");
  PlannerConfig cfg;
  const VehicleState ego = ego_at({30, -1.75}, 9.0);
  const VehicleState far = npc_at({30 + cfg.lookahead + 5.0, -1.75}, 0.0);

  EgoPlanner without(map, {"e0"}, {300, -1.75}, cfg, 0.1);
  EgoPlanner with(map, {"e0"}, {300, -1.75}, cfg, 0.1);
  const Command a = without.plan(ego, {});
  const Command b = with.plan(ego, {far});
  CHECK(a.accel == b.accel);
  CHECK(a.steer == b.steer);
}

TEST_CASE("identical inputs give identical commands") {
  const MapSpec map = build_archetype_map("lane-follow");
  PlannerConfig cfg;
  EgoPlanner p1(map, {"e0"}, {300, -1.75}, cfg, 0.1);
  EgoPlanner p2(map, {"e0"}, {300, -1.75}, cfg, 0.1);
  const VehicleState ego = ego_at({60, -1.75}, 11.0);
  const std::vector<VehicleState> npcs = {npc_at({90, -1.75}, 4.0),
                                          npc_at({80, 1.75}, 7.0, 3.14159)};
  for (int i = 0; i < 20; ++i) {
    const Command a = p1.plan(ego, npcs);
    const Command b = p2.plan(ego, npcs);
    CHECK(a.accel == b.accel);
    CHECK(a.steer == b.steer);
  }
}

TEST_CASE("planner config validation") {
  PlannerConfig bad;
  bad.comfort_decel = 10.0;
  bad.max_decel = 6.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("left-turn route follows the connector to arrival") {
  ScenarioSpec spec;
  spec.map = build_archetype_map("intersection-left");
  spec.ego.start_position = {-120, -1.75};
  spec.ego.start_heading = 0.0;
  spec.ego.start_speed = 8.0;
  spec.ego.destination = {1.75, 120};
  spec.ego.route = {"ew_e_app", "conn_left", "ns_n_exit"};
  spec.duration_limit = 60.0;
  spec.dt = 0.1;
  NpcSpec parked;
  parked.waypoints = {{{-1.75, 140}, 0.0}, {{-1.75, 135}, 0.0}};
  spec.npcs.push_back(parked);

  const Trace trace = simulate(spec, PlannerConfig{});
  CHECK(trace.terminal == TerminalReason::Arrival);
  // Heading ends up northbound after the turn.
  CHECK(std::abs(wrap_angle_signed(trace.steps.back().ego.heading - 1.5708)) <
        0.3);
}

TEST_CASE("ego yields to crossing traffic at the intersection") {
  ScenarioSpec spec;
  spec.map = build_archetype_map("intersection-straight");
  spec.ego.start_position = {-60, -1.75};
  spec.ego.start_heading = 0.0;
  spec.ego.start_speed = 10.0;
  spec.ego.destination = {120, -1.75};
  spec.ego.route = {"ew_e"};
  spec.duration_limit = 40.0;
  spec.dt = 0.1;
  NpcSpec crosser;
  crosser.waypoints = {
      {{-1.75, 60}, 10.0}, {{-1.75, 0}, 10.0}, {{-1.75, -80}, 10.0}};
  spec.npcs.push_back(crosser);

  const Trace trace = simulate(spec, PlannerConfig{});
  CHECK(trace.terminal == TerminalReason::Arrival);
  CHECK(trace.min_bb_distance > 1.0);
  double min_speed_near_conflict = 1e9;
  for (const TraceStep& step : trace.steps) {
    if (step.ego.position.x > -40.0 && step.ego.position.x < 0.0)
      min_speed_near_conflict = std::min(min_speed_near_conflict, step.ego.speed);
  }
  CHECK(min_speed_near_conflict < 4.0);
}
