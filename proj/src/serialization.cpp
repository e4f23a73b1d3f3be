#include "causalfuzz/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace causalfuzz {

namespace {

using nlohmann::json;

void check_schema(const json& j, const char* kind) {
  if (!j.contains("schema_version"))
    throw std::runtime_error(std::string(kind) + ": missing schema_version");
  if (j.at("schema_version").get<int>() != kSchemaVersion)
    throw std::runtime_error(std::string(kind) + ": schema-version mismatch");
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (j.is_object() && j.contains(key)) return j.at(key).get<T>();
  return fallback;
}

json vec2_to_json(const Vec2& v) { return json::array({v.x, v.y}); }

Vec2 vec2_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json state_to_json(const VehicleState& s) {
  return {{"x", s.position.x},   {"y", s.position.y}, {"heading", s.heading},
          {"speed", s.speed},    {"accel", s.accel},  {"length", s.length},
          {"width", s.width}};
}

VehicleState state_from_json(const json& j) {
  VehicleState s;
  s.position = {j.at("x").get<double>(), j.at("y").get<double>()};
  s.heading = j.at("heading").get<double>();
  s.speed = j.at("speed").get<double>();
  s.accel = j.at("accel").get<double>();
  s.length = j.at("length").get<double>();
  s.width = j.at("width").get<double>();
  return s;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

json map_to_json(const MapSpec& map) {
  json lanes = json::array();
  for (const Lane& lane : map.lanes) {
    json pts = json::array();
    for (const Vec2& p : lane.centerline) pts.push_back(vec2_to_json(p));
    json jl = {{"id", lane.id},
               {"width", lane.width},
               {"direction", lane.direction},
               {"centerline", pts}};
    if (lane.left)
      jl["left"] = {{"id", lane.left->id},
                    {"same_direction", lane.left->same_direction}};
    if (lane.right)
      jl["right"] = {{"id", lane.right->id},
                     {"same_direction", lane.right->same_direction}};
    lanes.push_back(jl);
  }
  return {{"schema_version", kSchemaVersion}, {"lanes", lanes}};
}

MapSpec map_from_json(const json& j) {
  check_schema(j, "map");
  MapSpec map;
  for (const json& jl : j.at("lanes")) {
    Lane lane;
    lane.id = jl.at("id").get<std::string>();
    lane.width = jl.at("width").get<double>();
    lane.direction = get_or<std::string>(jl, "direction", "");
    for (const json& p : jl.at("centerline"))
      lane.centerline.push_back(vec2_from_json(p));
    if (jl.contains("left"))
      lane.left = LaneNeighbor{jl.at("left").at("id").get<std::string>(),
                               jl.at("left").at("same_direction").get<bool>()};
    if (jl.contains("right"))
      lane.right = LaneNeighbor{jl.at("right").at("id").get<std::string>(),
                                jl.at("right").at("same_direction").get<bool>()};
    map.lanes.push_back(std::move(lane));
  }
  map.build_index();
  map.validate();
  return map;
}

json scenario_to_json(const ScenarioSpec& spec) {
  json npcs = json::array();
  for (const NpcSpec& npc : spec.npcs) {
    json wps = json::array();
    for (const NpcWaypoint& wp : npc.waypoints)
      wps.push_back({{"position", vec2_to_json(wp.position)},
                     {"speed", wp.speed}});
    npcs.push_back({{"waypoints", wps},
                    {"length", npc.length},
                    {"width", npc.width}});
  }
  return {{"schema_version", kSchemaVersion},
          {"map", map_to_json(spec.map)},
          {"ego",
           {{"start", vec2_to_json(spec.ego.start_position)},
            {"heading", spec.ego.start_heading},
            {"start_speed", spec.ego.start_speed},
            {"destination", vec2_to_json(spec.ego.destination)},
            {"route", spec.ego.route},
            {"length", spec.ego.length},
            {"width", spec.ego.width}}},
          {"npcs", npcs},
          {"duration_limit", spec.duration_limit},
          {"dt", spec.dt}};
}

ScenarioSpec scenario_from_json(const json& j) {
  check_schema(j, "scenario");
  ScenarioSpec spec;
  spec.map = map_from_json(j.at("map"));
  const json& je = j.at("ego");
  spec.ego.start_position = vec2_from_json(je.at("start"));
  spec.ego.start_heading = je.at("heading").get<double>();
  spec.ego.start_speed = get_or(je, "start_speed", 0.0);
  spec.ego.destination = vec2_from_json(je.at("destination"));
  spec.ego.route = je.at("route").get<std::vector<std::string>>();
  spec.ego.length = get_or(je, "length", 4.6);
  spec.ego.width = get_or(je, "width", 2.0);
  for (const json& jn : j.at("npcs")) {
    NpcSpec npc;
    npc.length = get_or(jn, "length", 4.6);
    npc.width = get_or(jn, "width", 2.0);
    for (const json& jw : jn.at("waypoints"))
      npc.waypoints.push_back(
          {vec2_from_json(jw.at("position")), jw.at("speed").get<double>()});
    spec.npcs.push_back(std::move(npc));
  }
  spec.duration_limit = j.at("duration_limit").get<double>();
  spec.dt = j.at("dt").get<double>();
  return spec;
}

json trace_to_json(const Trace& trace) {
  json steps = json::array();
  for (const TraceStep& step : trace.steps) {
    json npcs = json::array();
    for (const VehicleState& s : step.npcs) npcs.push_back(state_to_json(s));
    steps.push_back({{"ego", state_to_json(step.ego)},
                     {"npcs", npcs},
                     {"collision", step.collision},
                     {"fe", step.fault_ego},
                     {"fn", step.fault_npc},
                     {"colliding_npc", step.colliding_npc}});
  }
  const char* terminal = trace.terminal == TerminalReason::Arrival ? "arrival"
                         : trace.terminal == TerminalReason::Collision
                             ? "collision"
                             : "timeout";
  return {{"schema_version", kSchemaVersion},
          {"dt", trace.dt},
          {"destination", vec2_to_json(trace.destination)},
          {"terminal", terminal},
          {"min_bb_distance", trace.min_bb_distance},
          {"steps", steps}};
}

Trace trace_from_json(const json& j) {
  check_schema(j, "trace");
  Trace trace;
  trace.dt = j.at("dt").get<double>();
  trace.destination = vec2_from_json(j.at("destination"));
  trace.min_bb_distance = j.at("min_bb_distance").get<double>();
  const std::string terminal = j.at("terminal").get<std::string>();
  trace.terminal = terminal == "arrival"     ? TerminalReason::Arrival
                   : terminal == "collision" ? TerminalReason::Collision
                                             : TerminalReason::Timeout;
  for (const json& js : j.at("steps")) {
    TraceStep step;
    step.ego = state_from_json(js.at("ego"));
    for (const json& jn : js.at("npcs")) step.npcs.push_back(state_from_json(jn));
    step.collision = js.at("collision").get<bool>();
    step.fault_ego = js.at("fe").get<int>();
    step.fault_npc = js.at("fn").get<int>();
    step.colliding_npc = get_or(js, "colliding_npc", -1);
    trace.steps.push_back(std::move(step));
  }
  if (trace.steps.empty()) throw std::runtime_error("trace: no steps");
  return trace;
}

json graph_to_json(const CausalGraph& g) {
  json weighted = json::array();
  for (std::size_t i = 0; i < g.weights.rows; ++i)
    for (std::size_t j2 = 0; j2 < g.weights.cols; ++j2)
      if (g.weights.at(i, j2) != 0.0)
        weighted.push_back({{"src", j2}, {"dst", i}, {"w", g.weights.at(i, j2)}});
  json binary = json::array();
  for (std::size_t i = 0; i < g.binary.rows; ++i)
    for (std::size_t j2 = 0; j2 < g.binary.cols; ++j2)
      if (g.binary.at(i, j2)) binary.push_back({{"src", j2}, {"dst", i}});
  return {{"schema_version", kSchemaVersion},
          {"labels", g.labels},
          {"blocks",
           {{"scene", g.blocks.scene},
            {"action", g.blocks.action},
            {"violation", g.blocks.violation}}},
          {"causal_order", g.causal_order},
          {"weighted_edges", weighted},
          {"binary_edges", binary},
          {"low_confidence", g.low_confidence}};
}

CausalGraph graph_from_json(const json& j) {
  check_schema(j, "graph");
  CausalGraph g;
  g.labels = j.at("labels").get<std::vector<std::string>>();
  g.blocks.scene = j.at("blocks").at("scene").get<int>();
  g.blocks.action = j.at("blocks").at("action").get<int>();
  g.blocks.violation = j.at("blocks").at("violation").get<int>();
  g.causal_order = j.at("causal_order").get<std::vector<int>>();
  const std::size_t u = g.labels.size();
  g.weights = Matrix(u, u);
  g.binary = BinaryMatrix(u, u);
  for (const json& e : j.at("weighted_edges"))
    g.weights.at(e.at("dst").get<std::size_t>(),
                 e.at("src").get<std::size_t>()) = e.at("w").get<double>();
  for (const json& e : j.at("binary_edges"))
    g.binary.at(e.at("dst").get<std::size_t>(),
                e.at("src").get<std::size_t>()) = 1;
  g.low_confidence = get_or(j, "low_confidence", false);
  return g;
}

std::string graph_to_dot(const CausalGraph& g) {
  std::ostringstream out;
  out << "digraph causal {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < g.labels.size(); ++i)
    out << "  \"" << g.labels[i] << "\";\n";
  for (const CausalEdge& e : g.edges()) {
    out << "  \"" << g.labels[static_cast<std::size_t>(e.src)] << "\" -> \""
        << g.labels[static_cast<std::size_t>(e.dst)] << "\" [label=\""
        << format_double(e.weight) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

json binary_matrix_to_json(const BinaryMatrix& m) {
  json edges = json::array();
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      if (m.at(i, j)) edges.push_back({{"src", j}, {"dst", i}});
  return {{"schema_version", kSchemaVersion},
          {"rows", m.rows},
          {"cols", m.cols},
          {"edges", edges}};
}

BinaryMatrix binary_matrix_from_json(const json& j) {
  check_schema(j, "pattern");
  BinaryMatrix m(j.at("rows").get<std::size_t>(),
                 j.at("cols").get<std::size_t>());
  for (const json& e : j.at("edges"))
    m.at(e.at("dst").get<std::size_t>(), e.at("src").get<std::size_t>()) = 1;
  return m;
}

json config_to_json(const CampaignConfig& cfg) {
  return {{"schema_version", kSchemaVersion},
          {"method", cfg.method},
          {"seed", cfg.seed},
          {"budget", cfg.budget},
          {"max_seconds", cfg.max_seconds},
          {"archetype",
           {{"name", cfg.archetype.name},
            {"npc_count", cfg.archetype.npc_count},
            {"speed_min", cfg.archetype.speed_min},
            {"speed_max", cfg.archetype.speed_max},
            {"spawn_min", cfg.archetype.spawn_min},
            {"spawn_max", cfg.archetype.spawn_max},
            {"initial_seeds", cfg.archetype.initial_seeds},
            {"duration_limit", cfg.archetype.duration_limit},
            {"dt", cfg.archetype.dt}}},
          {"planner",
           {{"desired_speed", cfg.planner.desired_speed},
            {"time_headway", cfg.planner.time_headway},
            {"min_gap", cfg.planner.min_gap},
            {"max_accel", cfg.planner.max_accel},
            {"comfort_decel", cfg.planner.comfort_decel},
            {"max_decel", cfg.planner.max_decel},
            {"lane_change_trigger_gap", cfg.planner.lane_change_trigger_gap},
            {"safe_gap_front", cfg.planner.safe_gap_front},
            {"safe_gap_rear", cfg.planner.safe_gap_rear},
            {"lookahead", cfg.planner.lookahead},
            {"max_steer", cfg.planner.max_steer},
            {"pursuit_gain", cfg.planner.pursuit_gain},
            {"pursuit_min", cfg.planner.pursuit_min},
            {"pursuit_max", cfg.planner.pursuit_max},
            {"lane_change_cooldown", cfg.planner.lane_change_cooldown}}},
          {"sim",
           {{"arrival_threshold", cfg.sim.arrival_threshold},
            {"npc_max_speed", cfg.sim.npc_max_speed},
            {"lane_cross_memory", cfg.sim.lane_cross_memory}}},
          {"abstraction",
           {{"sectors", cfg.abstraction.sectors},
            {"rings", cfg.abstraction.rings},
            {"perception_range", cfg.abstraction.perception_range},
            {"accel_threshold", cfg.abstraction.accel_threshold},
            {"decel_threshold", cfg.abstraction.decel_threshold},
            {"heading_threshold", cfg.abstraction.heading_threshold},
            {"stride", cfg.abstraction.stride}}},
          {"discovery",
           {{"binarize_threshold", cfg.discovery.binarize_threshold},
            {"max_iterations", cfg.discovery.max_iterations},
            {"tolerance", cfg.discovery.tolerance},
            {"ica_seed", cfg.discovery.ica_seed},
            {"jitter", cfg.discovery.jitter},
            {"jitter_amplitude", cfg.discovery.jitter_amplitude}}},
          {"thresholds",
           {{"theta_ts", cfg.thresholds.theta_ts},
            {"theta_vd", cfg.thresholds.theta_vd}}},
          {"mutation",
           {{"epsilon", cfg.mutation.epsilon},
            {"longitudinal_jitter", cfg.mutation.longitudinal_jitter},
            {"lateral_jitter_fraction", cfg.mutation.lateral_jitter_fraction},
            {"speed_jitter", cfg.mutation.speed_jitter},
            {"waypoint_probability", cfg.mutation.waypoint_probability}}},
          {"ga", {{"population", cfg.ga.population}}}};
}

CampaignConfig config_from_json(const json& j) {
  if (j.contains("schema_version")) check_schema(j, "config");
  CampaignConfig cfg;
  cfg.method = get_or<std::string>(j, "method", cfg.method);
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.budget = get_or(j, "budget", cfg.budget);
  cfg.max_seconds = get_or(j, "max_seconds", cfg.max_seconds);
  if (j.contains("archetype")) {
    const json& a = j.at("archetype");
    cfg.archetype.name = get_or<std::string>(a, "name", cfg.archetype.name);
    cfg.archetype.npc_count = get_or(a, "npc_count", cfg.archetype.npc_count);
    cfg.archetype.speed_min = get_or(a, "speed_min", cfg.archetype.speed_min);
    cfg.archetype.speed_max = get_or(a, "speed_max", cfg.archetype.speed_max);
    cfg.archetype.spawn_min = get_or(a, "spawn_min", cfg.archetype.spawn_min);
    cfg.archetype.spawn_max = get_or(a, "spawn_max", cfg.archetype.spawn_max);
    cfg.archetype.initial_seeds =
        get_or(a, "initial_seeds", cfg.archetype.initial_seeds);
    cfg.archetype.duration_limit =
        get_or(a, "duration_limit", cfg.archetype.duration_limit);
    cfg.archetype.dt = get_or(a, "dt", cfg.archetype.dt);
  }
  if (j.contains("planner")) {
    const json& p = j.at("planner");
    cfg.planner.desired_speed = get_or(p, "desired_speed", cfg.planner.desired_speed);
    cfg.planner.time_headway = get_or(p, "time_headway", cfg.planner.time_headway);
    cfg.planner.min_gap = get_or(p, "min_gap", cfg.planner.min_gap);
    cfg.planner.max_accel = get_or(p, "max_accel", cfg.planner.max_accel);
    cfg.planner.comfort_decel = get_or(p, "comfort_decel", cfg.planner.comfort_decel);
    cfg.planner.max_decel = get_or(p, "max_decel", cfg.planner.max_decel);
    cfg.planner.lane_change_trigger_gap =
        get_or(p, "lane_change_trigger_gap", cfg.planner.lane_change_trigger_gap);
    cfg.planner.safe_gap_front = get_or(p, "safe_gap_front", cfg.planner.safe_gap_front);
    cfg.planner.safe_gap_rear = get_or(p, "safe_gap_rear", cfg.planner.safe_gap_rear);
    cfg.planner.lookahead = get_or(p, "lookahead", cfg.planner.lookahead);
    cfg.planner.max_steer = get_or(p, "max_steer", cfg.planner.max_steer);
    cfg.planner.pursuit_gain = get_or(p, "pursuit_gain", cfg.planner.pursuit_gain);
    cfg.planner.pursuit_min = get_or(p, "pursuit_min", cfg.planner.pursuit_min);
    cfg.planner.pursuit_max = get_or(p, "pursuit_max", cfg.planner.pursuit_max);
    cfg.planner.lane_change_cooldown =
        get_or(p, "lane_change_cooldown", cfg.planner.lane_change_cooldown);
  }
  if (j.contains("sim")) {
    const json& s = j.at("sim");
    cfg.sim.arrival_threshold = get_or(s, "arrival_threshold", cfg.sim.arrival_threshold);
    cfg.sim.npc_max_speed = get_or(s, "npc_max_speed", cfg.sim.npc_max_speed);
    cfg.sim.lane_cross_memory = get_or(s, "lane_cross_memory", cfg.sim.lane_cross_memory);
  }
  if (j.contains("abstraction")) {
    const json& a = j.at("abstraction");
    cfg.abstraction.sectors = get_or(a, "sectors", cfg.abstraction.sectors);
    cfg.abstraction.rings = get_or(a, "rings", cfg.abstraction.rings);
    cfg.abstraction.perception_range =
        get_or(a, "perception_range", cfg.abstraction.perception_range);
    cfg.abstraction.accel_threshold =
        get_or(a, "accel_threshold", cfg.abstraction.accel_threshold);
    cfg.abstraction.decel_threshold =
        get_or(a, "decel_threshold", cfg.abstraction.decel_threshold);
    cfg.abstraction.heading_threshold =
        get_or(a, "heading_threshold", cfg.abstraction.heading_threshold);
    cfg.abstraction.stride = get_or(a, "stride", cfg.abstraction.stride);
  }
  if (j.contains("discovery")) {
    const json& d = j.at("discovery");
    cfg.discovery.binarize_threshold =
        get_or(d, "binarize_threshold", cfg.discovery.binarize_threshold);
    cfg.discovery.max_iterations =
        get_or(d, "max_iterations", cfg.discovery.max_iterations);
    cfg.discovery.tolerance = get_or(d, "tolerance", cfg.discovery.tolerance);
    cfg.discovery.ica_seed = get_or<std::uint64_t>(d, "ica_seed", cfg.discovery.ica_seed);
    cfg.discovery.jitter = get_or(d, "jitter", cfg.discovery.jitter);
    cfg.discovery.jitter_amplitude =
        get_or(d, "jitter_amplitude", cfg.discovery.jitter_amplitude);
  }
  if (j.contains("thresholds")) {
    const json& t = j.at("thresholds");
    cfg.thresholds.theta_ts = get_or(t, "theta_ts", cfg.thresholds.theta_ts);
    cfg.thresholds.theta_vd = get_or(t, "theta_vd", cfg.thresholds.theta_vd);
  }
  if (j.contains("mutation")) {
    const json& m = j.at("mutation");
    cfg.mutation.epsilon = get_or(m, "epsilon", cfg.mutation.epsilon);
    cfg.mutation.longitudinal_jitter =
        get_or(m, "longitudinal_jitter", cfg.mutation.longitudinal_jitter);
    cfg.mutation.lateral_jitter_fraction =
        get_or(m, "lateral_jitter_fraction", cfg.mutation.lateral_jitter_fraction);
    cfg.mutation.speed_jitter = get_or(m, "speed_jitter", cfg.mutation.speed_jitter);
    cfg.mutation.waypoint_probability =
        get_or(m, "waypoint_probability", cfg.mutation.waypoint_probability);
  }
  if (j.contains("ga"))
    cfg.ga.population = get_or(j.at("ga"), "population", cfg.ga.population);
  cfg.validate();
  return cfg;
}

std::string matrix_to_csv(const ScenarioMatrix& m) {
  std::ostringstream out;
  for (std::size_t i = 0; i < m.values.rows; ++i) {
    out << m.labels[i];
    for (std::size_t c = 0; c < m.values.cols; ++c)
      out << ',' << format_double(m.values.at(i, c));
    out << '\n';
  }
  return out.str();
}

ScenarioMatrix matrix_from_csv(const std::string& text) {
  ScenarioMatrix m;
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < 2) throw std::runtime_error("matrix csv: short row");
    m.labels.push_back(fields[0]);
    std::vector<double> row;
    for (std::size_t i = 1; i < fields.size(); ++i)
      row.push_back(std::stod(fields[i]));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("matrix csv: empty");
  m.values = Matrix(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.values.cols)
      throw std::runtime_error("matrix csv: ragged rows");
    for (std::size_t c = 0; c < rows[i].size(); ++c) m.values.at(i, c) = rows[i][c];
  }
  for (const std::string& label : m.labels) {
    if (label.rfind("sr", 0) == 0)
      ++m.blocks.scene;
    else if (label.rfind("ar_", 0) == 0)
      ++m.blocks.action;
    else if (label.rfind("vr_", 0) == 0)
      ++m.blocks.violation;
    else
      ++m.blocks.scene;  // free-form variables count as inputs
  }
  return m;
}

std::string log_to_csv(const std::vector<LogRow>& rows) {
  std::ostringstream out;
  out << "iteration,result,ts,vd,degree,parent_degree,sac,savc,ft,"
         "admitted,mutation_time_s,feedback_time_s\n";
  for (const LogRow& r : rows) {
    out << r.iteration << ',' << r.result << ',' << format_double(r.ts) << ','
        << format_double(r.vd) << ',' << format_double(r.degree) << ','
        << format_double(r.parent_degree) << ',' << r.sac_size << ','
        << r.savc_size << ',' << r.ft_size << ',' << r.admitted << ','
        << format_double(r.mutation_time_s) << ','
        << format_double(r.feedback_time_s) << '\n';
  }
  return out.str();
}

std::vector<LogRow> log_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("log csv: empty");
  std::vector<LogRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 12) throw std::runtime_error("log csv: bad row");
    LogRow r;
    r.iteration = std::stoi(f[0]);
    r.result = f[1];
    r.ts = std::stod(f[2]);
    r.vd = std::stod(f[3]);
    r.degree = std::stod(f[4]);
    r.parent_degree = std::stod(f[5]);
    r.sac_size = static_cast<std::size_t>(std::stoul(f[6]));
    r.savc_size = static_cast<std::size_t>(std::stoul(f[7]));
    r.ft_size = static_cast<std::size_t>(std::stoul(f[8]));
    r.admitted = f[9];
    r.mutation_time_s = std::stod(f[10]);
    r.feedback_time_s = std::stod(f[11]);
    rows.push_back(std::move(r));
  }
  return rows;
}

json summary_to_json(const CampaignResult& r) {
  return {{"schema_version", kSchemaVersion},
          {"method", r.method},
          {"seed", r.seed},
          {"budget", r.budget},
          {"initial_seeds", r.initial_seeds},
          {"executions", r.executions},
          {"violations", r.ft.size()},
          {"sac", r.sac.size()},
          {"savc", r.savc.size()},
          {"corpus", r.corpus.size()},
          {"first_failure", r.first_failure}};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_campaign_outputs(const CampaignResult& result,
                            const CampaignConfig& cfg,
                            const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir))
    throw std::runtime_error("output dir '" + out_dir.string() +
                             "' not writable");
  write_text_file(out_dir / "config.json", config_to_json(cfg).dump(2) + "\n");
  write_text_file(out_dir / "log.csv", log_to_csv(result.log));
  write_text_file(out_dir / "summary.json",
                  summary_to_json(result).dump(2) + "\n");

  const auto write_set = [&](const char* name,
                             const std::vector<PatternEntry>& entries) {
    const fs::path dir = out_dir / name;
    fs::create_directories(dir);
    for (const PatternEntry& e : entries) {
      const std::string tag = std::to_string(e.execution_index);
      write_text_file(dir / ("scenario_" + tag + ".json"),
                      scenario_to_json(e.scenario).dump(2) + "\n");
      write_text_file(dir / ("pattern_" + tag + ".json"),
                      binary_matrix_to_json(e.matrix).dump(2) + "\n");
    }
  };
  write_set("sac", result.sac);
  write_set("savc", result.savc);

  const fs::path ft_dir = out_dir / "ft";
  fs::create_directories(ft_dir);
  for (const FailedTest& ft : result.ft) {
    const std::string tag = std::to_string(ft.execution_index);
    write_text_file(ft_dir / ("scenario_" + tag + ".json"),
                    scenario_to_json(ft.scenario).dump(2) + "\n");
    write_text_file(ft_dir / ("graph_" + tag + ".json"),
                    graph_to_json(ft.graph).dump(2) + "\n");
    write_text_file(ft_dir / ("graph_" + tag + ".dot"),
                    graph_to_dot(ft.graph));
  }
}

}  // namespace causalfuzz
