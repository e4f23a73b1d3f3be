#include "causalfuzz/archetypes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace causalfuzz {

namespace {

constexpr double kLaneWidth = 3.5;

Lane straight_lane(std::string id, std::string direction, Vec2 a, Vec2 b) {
  Lane lane;
  lane.id = std::move(id);
  lane.direction = std::move(direction);
  lane.width = kLaneWidth;
  lane.centerline = {a, b};
  return lane;
}

MapSpec two_way_four_lane() {
  MapSpec map;
  map.lanes.push_back(straight_lane("e0", "east", {0, -1.75}, {400, -1.75}));
  map.lanes.push_back(straight_lane("e1", "east", {0, -5.25}, {400, -5.25}));
  map.lanes.push_back(straight_lane("w0", "west", {400, 1.75}, {0, 1.75}));
  map.lanes.push_back(straight_lane("w1", "west", {400, 5.25}, {0, 5.25}));
  map.find("e0")->left = LaneNeighbor{"w0", false};
  map.find("e0")->right = LaneNeighbor{"e1", true};
  map.find("e1")->left = LaneNeighbor{"e0", true};
  map.find("w0")->left = LaneNeighbor{"e0", false};
  map.find("w0")->right = LaneNeighbor{"w1", true};
  map.find("w1")->left = LaneNeighbor{"w0", true};
  map.build_index();
  return map;
}

MapSpec one_way_four_lane() {
  MapSpec map;
  for (int i = 0; i < 4; ++i) {
    const double y = 3.5 * i;
    map.lanes.push_back(straight_lane("l" + std::to_string(i), "east",
                                      {0, y}, {400, y}));
  }
  for (int i = 0; i < 4; ++i) {
    Lane* lane = map.find("l" + std::to_string(i));
    if (i + 1 < 4) lane->left = LaneNeighbor{"l" + std::to_string(i + 1), true};
    if (i - 1 >= 0) lane->right = LaneNeighbor{"l" + std::to_string(i - 1), true};
  }
  map.build_index();
  return map;
}

MapSpec crossing_roads() {
  MapSpec map;
  map.lanes.push_back(straight_lane("ew_e", "east", {-150, -1.75}, {150, -1.75}));
  map.lanes.push_back(straight_lane("ew_w", "west", {150, 1.75}, {-150, 1.75}));
  map.lanes.push_back(straight_lane("ns_n", "north", {1.75, -150}, {1.75, 150}));
  map.lanes.push_back(straight_lane("ns_s", "south", {-1.75, 150}, {-1.75, -150}));
  map.find("ew_e")->left = LaneNeighbor{"ew_w", false};
  map.find("ew_w")->left = LaneNeighbor{"ew_e", false};
  map.find("ns_n")->left = LaneNeighbor{"ns_s", false};
  map.find("ns_s")->left = LaneNeighbor{"ns_n", false};
  map.build_index();
  return map;
}

MapSpec crossing_roads_left_turn() {
  MapSpec map;
  map.lanes.push_back(straight_lane("ew_e_app", "east", {-150, -1.75}, {-6, -1.75}));
  map.lanes.push_back(straight_lane("ns_n_exit", "north", {1.75, 6}, {1.75, 150}));
  map.lanes.push_back(straight_lane("ew_w", "west", {150, 1.75}, {-150, 1.75}));
  map.lanes.push_back(straight_lane("ns_s", "south", {-1.75, 150}, {-1.75, -150}));
  map.find("ew_w")->left = LaneNeighbor{"ew_e_app", false};
  map.find("ew_e_app")->left = LaneNeighbor{"ew_w", false};

  // Quarter arc from the approach lane end to the northbound exit.
  Lane conn;
  conn.id = "conn_left";
  conn.direction = "east-to-north";
  conn.width = kLaneWidth;
  const Vec2 center{-6.0, 6.0};
  const double radius = 7.75;
  const int segments = 12;
  for (int i = 0; i <= segments; ++i) {
    const double theta = -std::numbers::pi_v<double> / 2.0 +
                         (std::numbers::pi_v<double> / 2.0) * i / segments;
    conn.centerline.push_back(
        {center.x + radius * std::cos(theta), center.y + radius * std::sin(theta)});
  }
  map.lanes.push_back(conn);
  map.build_index();
  return map;
}

struct EgoTask {
  EgoSpec ego;
  std::vector<std::string> npc_lanes;
  bool spawn_relative_to_conflict = false;  // intersections spawn around (0,0)
};

EgoTask ego_task_for(const std::string& name, const MapSpec& map) {
  EgoTask task;
  if (name == "lane-follow") {
    task.ego.start_position = {20, -1.75};
    task.ego.start_heading = 0.0;
    task.ego.start_speed = 8.0;
    task.ego.destination = {300, -1.75};
    task.ego.route = {"e0"};
    task.npc_lanes = {"e0", "e1", "w0"};
  } else if (name == "lane-change") {
    task.ego.start_position = {20, 0};
    task.ego.start_heading = 0.0;
    task.ego.start_speed = 10.0;
    task.ego.destination = {300, 0};
    task.ego.route = {"l0"};
    task.npc_lanes = {"l0", "l1", "l2"};
  } else if (name == "intersection-straight") {
    task.ego.start_position = {-120, -1.75};
    task.ego.start_heading = 0.0;
    task.ego.start_speed = 8.0;
    task.ego.destination = {120, -1.75};
    task.ego.route = {"ew_e"};
    task.npc_lanes = {"ns_n", "ns_s", "ew_w"};
    task.spawn_relative_to_conflict = true;
  } else if (name == "intersection-left") {
    task.ego.start_position = {-120, -1.75};
    task.ego.start_heading = 0.0;
    task.ego.start_speed = 8.0;
    task.ego.destination = {1.75, 120};
    task.ego.route = {"ew_e_app", "conn_left", "ns_n_exit"};
    task.npc_lanes = {"ew_w", "ns_s"};
    task.spawn_relative_to_conflict = true;
  } else {
    throw std::invalid_argument("unknown archetype '" + name + "'");
  }
  (void)map;
  return task;
}

}  // namespace

void ArchetypeConfig::validate() const {
  if (npc_count < 1)
    throw std::invalid_argument("archetype: npc_count must be >= 1");
  if (speed_min < 0.0 || speed_max < speed_min)
    throw std::invalid_argument("archetype: bad speed range");
  if (spawn_max < spawn_min)
    throw std::invalid_argument("archetype: bad spawn range");
  if (initial_seeds < 1)
    throw std::invalid_argument("archetype: initial_seeds must be >= 1");
  if (duration_limit <= 0.0 || dt <= 0.0)
    throw std::invalid_argument("archetype: duration and dt must be > 0");
}

MapSpec build_archetype_map(const std::string& name) {
  if (name == "lane-follow") return two_way_four_lane();
  if (name == "lane-change") return one_way_four_lane();
  if (name == "intersection-straight") return crossing_roads();
  if (name == "intersection-left") return crossing_roads_left_turn();
  throw std::invalid_argument("unknown archetype '" + name + "'");
}

ScenarioSpec generate_scenario(const ArchetypeConfig& cfg, Rng& rng) {
  cfg.validate();
  ScenarioSpec spec;
  spec.map = build_archetype_map(cfg.name);
  const EgoTask task = ego_task_for(cfg.name, spec.map);
  spec.ego = task.ego;
  spec.duration_limit = cfg.duration_limit;
  spec.dt = cfg.dt;

  for (int k = 0; k < cfg.npc_count; ++k) {
    const std::string lane_id =
        task.npc_lanes[static_cast<std::size_t>(k) % task.npc_lanes.size()];
    const Lane* lane = spec.map.find(lane_id);
    // Intersections spawn NPCs approaching the crossing; straight roads
    // spawn them along the ego's corridor.
    const double anchor_s = task.spawn_relative_to_conflict
                                ? lane->project({0, 0}).s
                                : lane->project(spec.ego.start_position).s;
    double s0;
    if (task.spawn_relative_to_conflict) {
      s0 = anchor_s - rng.uniform(cfg.spawn_min + 25.0, cfg.spawn_max + 60.0);
    } else if (lane->direction == "west") {
      // Oncoming traffic: place it so that it meets the ego mid-run.
      s0 = lane->project(spec.ego.start_position).s -
           rng.uniform(cfg.spawn_min + 60.0, cfg.spawn_max + 150.0);
    } else {
      s0 = anchor_s + rng.uniform(cfg.spawn_min, cfg.spawn_max);
    }
    s0 = std::clamp(s0, 5.0, lane->length() - 20.0);

    NpcSpec npc;
    const double base_speed = rng.uniform(cfg.speed_min, cfg.speed_max);
    for (int w = 0; w < 3; ++w) {
      const double s = std::clamp(s0 + 45.0 * w, 0.0, lane->length() - 1.0);
      NpcWaypoint wp;
      wp.position = lane->point_at(s);
      wp.speed = std::clamp(base_speed + rng.uniform(-1.5, 1.5), 0.0,
                            cfg.speed_max + 2.0);
      npc.waypoints.push_back(wp);
    }
    spec.npcs.push_back(std::move(npc));
  }
  return spec;
}

}  // namespace causalfuzz
