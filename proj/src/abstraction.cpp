#include "causalfuzz/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace causalfuzz {

namespace {

void mark_npc(SceneVector& cells, const VehicleState& ego,
              const VehicleState& npc, const AbstractionConfig& cfg) {
  const double dist = distance(npc.position, ego.position);
  if (dist > cfg.perception_range) return;
  const Vec2 local = to_local_frame(npc.position, ego.position, ego.heading);
  const double theta = wrap_angle_2pi(std::atan2(local.y, local.x));
  const double sector_width = 2.0 * std::numbers::pi_v<double> / cfg.sectors;
  int sector = static_cast<int>(theta / sector_width);
  sector = std::min(sector, cfg.sectors - 1);
  const double ring_depth = cfg.perception_range / cfg.rings;
  int ring = static_cast<int>(dist / ring_depth);
  ring = std::min(ring, cfg.rings - 1);  // boundary (dist == L) lands inside
  cells[static_cast<std::size_t>(sector * cfg.rings + ring)] = 1;
}

}  // namespace

void AbstractionConfig::validate() const {
  if (sectors < 1 || rings < 1)
    throw std::invalid_argument("abstraction: sectors and rings must be >= 1");
  if (perception_range <= 0.0)
    throw std::invalid_argument("abstraction: perception_range must be > 0");
  if (!(accel_threshold > 0.0) || !(decel_threshold < 0.0))
    throw std::invalid_argument(
        "abstraction: need accel_threshold > 0 > decel_threshold");
  if (heading_threshold <= 0.0)
    throw std::invalid_argument("abstraction: heading_threshold must be > 0");
  if (stride < 1) throw std::invalid_argument("abstraction: stride must be >= 1");
}

SceneVector abstract_scene(const VehicleState& ego,
                           const std::vector<VehicleState>& npcs,
                           const AbstractionConfig& cfg) {
  SceneVector cells(static_cast<std::size_t>(cfg.cell_count()), 0);
  for (const VehicleState& npc : npcs) mark_npc(cells, ego, npc, cfg);
  return cells;
}

ActionVector abstract_action(const VehicleState* prev, const VehicleState& cur,
                             const AbstractionConfig& cfg) {
  ActionVector a{0, 0, 0, 0, 0};
  if (!prev) return a;
  const double accel = cur.accel;
  const double dh = wrap_angle_signed(cur.heading - prev->heading);
  a[0] = accel >= cfg.accel_threshold ? 1 : 0;
  a[1] = accel <= cfg.decel_threshold ? 1 : 0;
  a[2] = -dh >= cfg.heading_threshold ? 1 : 0;  // h_{t-1} - h_t
  a[3] = dh >= cfg.heading_threshold ? 1 : 0;   // h_t - h_{t-1}
  a[4] = (a[0] || a[1] || a[2] || a[3]) ? 0 : 1;
  return a;
}

ViolationVector abstract_violation(const TraceStep& step) {
  if (!step.collision) return {0, 0};
  return {static_cast<std::uint8_t>(step.fault_ego),
          static_cast<std::uint8_t>(step.fault_npc)};
}

std::vector<std::size_t> sampled_steps(std::size_t step_count, int stride) {
  std::vector<std::size_t> idx;
  for (std::size_t i = step_count; i-- > 0;) {
    idx.push_back(i);
    if (i < static_cast<std::size_t>(stride)) break;
    i -= static_cast<std::size_t>(stride) - 1;
  }
  std::reverse(idx.begin(), idx.end());
  return idx;
}

std::vector<std::string> variable_labels(const AbstractionConfig& cfg) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(cfg.cell_count()) + 7);
  for (int c = 0; c < cfg.cell_count(); ++c)
    labels.push_back("sr" + std::to_string(c));
  for (const char* name : {"ar_accel", "ar_decel", "ar_left", "ar_right",
                           "ar_maintain"})
    labels.push_back(name);
  labels.push_back("vr_ego");
  labels.push_back("vr_npc");
  return labels;
}

ScenarioMatrix abstract_scenario(const Trace& trace,
                                 const AbstractionConfig& cfg) {
  cfg.validate();
  const auto idx = sampled_steps(trace.steps.size(), cfg.stride);
  if (idx.size() < 2)
    throw std::runtime_error(
        "abstraction: trace too short (need >= 2 sampled instants)");

  ScenarioMatrix out;
  out.blocks = {cfg.cell_count(), 5, 2};
  out.labels = variable_labels(cfg);
  const std::size_t u = static_cast<std::size_t>(out.blocks.total());
  out.values = Matrix(u, idx.size());

  for (std::size_t col = 0; col < idx.size(); ++col) {
    const TraceStep& step = trace.steps[idx[col]];
    const SceneVector scene = abstract_scene(step.ego, step.npcs, cfg);
    const VehicleState* prev =
        col == 0 ? nullptr : &trace.steps[idx[col - 1]].ego;
    const ActionVector action = abstract_action(prev, step.ego, cfg);
    const ViolationVector violation = abstract_violation(step);

    std::size_t row = 0;
    for (const auto v : scene) out.values.at(row++, col) = v;
    for (const auto v : action) out.values.at(row++, col) = v;
    for (const auto v : violation) out.values.at(row++, col) = v;
  }
  return out;
}

SceneVector scene_vector_of_npc(const TraceStep& step, std::size_t npc_index,
                                const AbstractionConfig& cfg) {
  SceneVector cells(static_cast<std::size_t>(cfg.cell_count()), 0);
  if (npc_index < step.npcs.size())
    mark_npc(cells, step.ego, step.npcs[npc_index], cfg);
  return cells;
}

}  // namespace causalfuzz
