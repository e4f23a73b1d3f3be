#include "causalfuzz/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace causalfuzz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A sequence of lanes followed end to end, parametrized by arc length.
struct Chain {
  std::vector<const Lane*> lanes;
  std::vector<double> offsets;
  double total = 0.0;

  Chain(const MapSpec& map, const std::vector<std::string>& ids) {
    for (const auto& id : ids) {
      const Lane* lane = map.find(id);
      if (!lane) throw std::invalid_argument("planner: unknown lane '" + id + "'");
      offsets.push_back(total);
      lanes.push_back(lane);
      total += lane->length();
    }
  }

  struct Proj {
    double s = 0.0;
    double lateral = 0.0;
    double distance = kInf;
    std::size_t lane_index = 0;
  };

  Proj project(const Vec2& p) const {
    Proj best;
    for (std::size_t i = 0; i < lanes.size(); ++i) {
      const auto lp = lanes[i]->project(p);
      if (lp.distance < best.distance) {
        best.distance = lp.distance;
        best.lateral = lp.lateral;
        best.s = offsets[i] + lp.s;
        best.lane_index = i;
      }
    }
    return best;
  }

  Vec2 point_at(double s) const {
    s = std::clamp(s, 0.0, total);
    std::size_t i = lanes.size() - 1;
    for (std::size_t k = 0; k + 1 < lanes.size(); ++k) {
      if (s < offsets[k + 1]) {
        i = k;
        break;
      }
    }
    return lanes[i]->point_at(s - offsets[i]);
  }
};

struct LeaderInfo {
  double gap = kInf;     // bumper-to-bumper along the path
  double speed = 0.0;    // leader speed projected on ego travel direction
  bool found = false;
};

LeaderInfo find_leader(const Chain& chain, double ego_s,
                       const VehicleState& ego,
                       const std::vector<const VehicleState*>& npcs,
                       double max_range) {
  LeaderInfo out;
  for (const VehicleState* npc : npcs) {
    const auto proj = chain.project(npc->position);
    const double half_width = chain.lanes[proj.lane_index]->width * 0.5;
    if (proj.distance > half_width + 0.3) continue;
    const double ahead = proj.s - ego_s;
    if (ahead <= 0.0 || ahead > max_range) continue;
    const double gap = ahead - 0.5 * (ego.length + npc->length);
    if (gap < out.gap) {
      out.gap = gap;
      out.speed =
          npc->speed * std::cos(wrap_angle_signed(npc->heading - ego.heading));
      out.found = true;
    }
  }
  return out;
}

// Front and rear bumper gaps on a candidate lane.
void lane_gaps(const Lane& lane, const Vec2& ego_pos, double ego_len,
               const std::vector<const VehicleState*>& npcs, double* front,
               double* rear) {
  *front = kInf;
  *rear = kInf;
  const double ego_s = lane.project(ego_pos).s;
  for (const VehicleState* npc : npcs) {
    const auto proj = lane.project(npc->position);
    if (proj.distance > lane.width * 0.5 + 0.3) continue;
    const double delta = proj.s - ego_s;
    const double sep = std::abs(delta) - 0.5 * (ego_len + npc->length);
    if (delta > 0.0)
      *front = std::min(*front, sep);
    else
      *rear = std::min(*rear, sep);
  }
}

}  // namespace

void PlannerConfig::validate() const {
  const double positives[] = {desired_speed, time_headway,   min_gap,
                              max_accel,     comfort_decel,  max_decel,
                              lane_change_trigger_gap, safe_gap_front,
                              safe_gap_rear, lookahead,      max_steer,
                              pursuit_gain,  pursuit_min,    pursuit_max};
  for (double v : positives) {
    if (v <= 0.0)
      throw std::invalid_argument("planner config: fields must be positive");
  }
  if (comfort_decel > max_decel)
    throw std::invalid_argument(
        "planner config: comfort_decel exceeds max_decel");
}

EgoPlanner::EgoPlanner(const MapSpec& map, std::vector<std::string> route,
                       Vec2 destination, const PlannerConfig& cfg, double dt)
    : map_(&map),
      route_(std::move(route)),
      destination_(destination),
      cfg_(cfg),
      dt_(dt) {
  cfg_.validate();
  if (route_.empty()) throw std::invalid_argument("planner: empty route");
  tracked_ = route_;
  current_lane_ = route_.front();

  // Precompute route/crossing-lane conflict points for the yield heuristic.
  Chain chain(*map_, route_);
  for (std::size_t li = 0; li < chain.lanes.size(); ++li) {
    const Lane* rl = chain.lanes[li];
    for (const Lane& other : map_->lanes) {
      if (std::find(route_.begin(), route_.end(), other.id) != route_.end())
        continue;
      for (std::size_t a = 0; a + 1 < rl->centerline.size(); ++a) {
        for (std::size_t b = 0; b + 1 < other.centerline.size(); ++b) {
          Vec2 pt;
          if (!segments_intersect(rl->centerline[a], rl->centerline[a + 1],
                                  other.centerline[b], other.centerline[b + 1],
                                  &pt))
            continue;
          const auto rp = rl->project(pt);
          const auto op = other.project(pt);
          const double angle = std::abs(wrap_angle_signed(
              rl->heading_at(rp.s) - other.heading_at(op.s)));
          if (angle < 0.45 || angle > std::numbers::pi_v<double> - 0.45)
            continue;  // near-parallel, not a crossing
          conflicts_.push_back(
              {chain.offsets[li] + rp.s, other.id, op.s});
        }
      }
    }
  }
}

double EgoPlanner::idm_accel(double v, double gap, double leader_speed) const {
  const double free_term = std::pow(v / cfg_.desired_speed, 4.0);
  double interaction = 0.0;
  if (gap < kInf) {
    const double dv = v - leader_speed;
    const double s_star =
        cfg_.min_gap +
        std::max(0.0, v * cfg_.time_headway +
                          v * dv / (2.0 * std::sqrt(cfg_.max_accel *
                                                    cfg_.comfort_decel)));
    const double s = std::max(gap, 0.1);
    interaction = (s_star / s) * (s_star / s);
  }
  const double a = cfg_.max_accel * (1.0 - free_term - interaction);
  return std::clamp(a, -cfg_.max_decel, cfg_.max_accel);
}

double EgoPlanner::yield_accel(
    const VehicleState& ego, double ego_s,
    const std::vector<const VehicleState*>& npcs) const {
  double a = kInf;
  for (const Conflict& c : conflicts_) {
    const double dist_ego = c.route_s - ego_s;
    if (dist_ego < 4.0 || dist_ego > 35.0) continue;  // committed or far
    const Lane* other = map_->find(c.other_lane);
    if (!other) continue;
    for (const VehicleState* npc : npcs) {
      const auto proj = other->project(npc->position);
      if (proj.distance > other->width * 0.5 + 0.3) continue;
      const double dist_npc = c.other_s - proj.s;
      if (dist_npc < 1.0 || dist_npc > 40.0) continue;
      if (npc->speed < 0.5) continue;
      const double heading_diff = std::abs(
          wrap_angle_signed(other->heading_at(proj.s) - npc->heading));
      if (heading_diff > 1.2) continue;  // not travelling along that lane
      const double t_npc = dist_npc / std::max(npc->speed, 0.1);
      if (t_npc > 6.0) continue;
      const double stop_gap = dist_ego - 6.0 - 0.5 * ego.length;
      a = std::min(a, idm_accel(ego.speed, std::max(stop_gap, 0.1), 0.0));
    }
  }
  return a;
}

Command EgoPlanner::plan(const VehicleState& ego,
                         const std::vector<VehicleState>& npcs) {
  cooldown_ = std::max(0.0, cooldown_ - dt_);

  // Locality: everything below sees only NPCs within the perception radius.
  std::vector<const VehicleState*> near;
  for (const VehicleState& npc : npcs) {
    if (distance(npc.position, ego.position) <= cfg_.lookahead)
      near.push_back(&npc);
  }

  Chain chain(*map_, tracked_);
  const auto ego_proj = chain.project(ego.position);
  current_lane_ = chain.lanes[ego_proj.lane_index]->id;

  LeaderInfo leader = find_leader(chain, ego_proj.s, ego, near, cfg_.lookahead);
  if (changing_to_) {
    Chain target(*map_, {*changing_to_});
    const auto tp = target.project(ego.position);
    const LeaderInfo tl = find_leader(target, tp.s, ego, near, cfg_.lookahead);
    if (tl.found && tl.gap < leader.gap) leader = tl;
  }

  double accel = leader.found ? idm_accel(ego.speed, leader.gap, leader.speed)
                              : idm_accel(ego.speed, kInf, 0.0);
  // Conflict offsets are route-chain arc lengths, valid while tracking it.
  if (tracked_ == route_)
    accel = std::min(accel, yield_accel(ego, ego_proj.s, near));

  // Slow down into the destination (the stop line sits past it so the IDM
  // equilibrium gap lands inside the arrival radius), and never run off the
  // path end. When the destination lies on a parallel lane, stop abeam of it
  // and wait for the merge instead of driving past.
  const double dist_to_dest = distance(ego.position, destination_);
  const bool homing = dist_to_dest < 30.0;
  if (homing) {
    double stop_gap = dist_to_dest;
    const auto dproj = chain.project(destination_);
    const bool on_dest_lane =
        chain.lanes[dproj.lane_index]->project(destination_).distance <
        chain.lanes[dproj.lane_index]->width * 0.75;
    if (!changing_to_ &&
        dproj.distance < 3.0 * chain.lanes[dproj.lane_index]->width &&
        !on_dest_lane) {
      // Hold short of abeam so the merge back has room to complete.
      stop_gap = std::min(stop_gap,
                          std::max(dproj.s - ego_proj.s - 10.0, 0.0));
    }
    accel = std::min(accel, idm_accel(ego.speed, stop_gap + 1.5, 0.0));
  }
  const double remaining = chain.total - ego_proj.s;
  if (!homing && remaining < 8.0)
    accel = std::min(accel,
                     idm_accel(ego.speed, std::max(remaining - 2.0, 0.1), 0.0));
  accel = std::clamp(accel, -cfg_.max_decel, cfg_.max_accel);

  const Lane* current = chain.lanes[ego_proj.lane_index];
  if (!changing_to_ && cooldown_ <= 0.0) {
    // No point starting an overtake inside the stopping horizon.
    const bool blocked = dist_to_dest > 80.0 && leader.found &&
                         leader.gap < cfg_.lane_change_trigger_gap;
    if (blocked) {
      for (const auto& nb : {current->left, current->right}) {
        if (!nb || !nb->same_direction) continue;
        const Lane* cand = map_->find(nb->id);
        if (!cand) continue;
        double front, rear;
        lane_gaps(*cand, ego.position, ego.length, near, &front, &rear);
        if (front > cfg_.safe_gap_front && rear > cfg_.safe_gap_rear) {
          changing_to_ = cand->id;
          break;
        }
      }
    } else if (std::find(route_.begin(), route_.end(), current->id) ==
               route_.end()) {
      // Off the route after an overtake: return when the route lane is clear.
      for (const auto& nb : {current->left, current->right}) {
        if (!nb || !nb->same_direction) continue;
        if (std::find(route_.begin(), route_.end(), nb->id) == route_.end())
          continue;
        const Lane* cand = map_->find(nb->id);
        if (!cand) continue;
        double front, rear;
        lane_gaps(*cand, ego.position, ego.length, near, &front, &rear);
        if (front > std::max(cfg_.safe_gap_front, cfg_.lane_change_trigger_gap) &&
            rear > cfg_.safe_gap_rear) {
          changing_to_ = cand->id;
          break;
        }
      }
    }
  }

  // Steering target: the lane being changed into, otherwise the tracked chain.
  Vec2 target_pt;
  double path_s;
  if (changing_to_) {
    Chain target(*map_, {*changing_to_});
    const auto tp = target.project(ego.position);
    if (std::abs(tp.lateral) < 0.35) {
      const bool on_route = std::find(route_.begin(), route_.end(),
                                      *changing_to_) != route_.end();
      tracked_ = on_route ? route_ : std::vector<std::string>{*changing_to_};
      current_lane_ = *changing_to_;
      changing_to_.reset();
      cooldown_ = cfg_.lane_change_cooldown;
      Chain fresh(*map_, tracked_);
      const auto fp = fresh.project(ego.position);
      path_s = fp.s;
      const double ld = std::clamp(cfg_.pursuit_gain * ego.speed,
                                   cfg_.pursuit_min, cfg_.pursuit_max);
      target_pt = fresh.point_at(path_s + ld);
    } else {
      path_s = tp.s;
      const double ld = std::clamp(cfg_.pursuit_gain * ego.speed,
                                   cfg_.pursuit_min, cfg_.pursuit_max);
      target_pt = target.point_at(path_s + ld);
    }
  } else {
    path_s = ego_proj.s;
    const double ld = std::clamp(cfg_.pursuit_gain * ego.speed,
                                 cfg_.pursuit_min, cfg_.pursuit_max);
    target_pt = chain.point_at(path_s + ld);
  }

  // Aim straight at the destination once it lies on the tracked lane and is
  // still ahead; a destination behind us means stopping, never a U-turn.
  if (homing && !changing_to_) {
    const Lane* lane = chain.lanes[chain.project(ego.position).lane_index];
    const Vec2 to_dest = destination_ - ego.position;
    const double bearing =
        wrap_angle_signed(std::atan2(to_dest.y, to_dest.x) - ego.heading);
    if (lane->project(destination_).distance < lane->width * 0.75 &&
        std::abs(bearing) < 1.75)
      target_pt = destination_;
  }

  const Vec2 to_target = target_pt - ego.position;
  const double ld_actual = std::max(to_target.norm(), 1.0);
  const double alpha =
      wrap_angle_signed(std::atan2(to_target.y, to_target.x) - ego.heading);
  const double wheelbase = std::max(0.5, 0.6 * ego.length);
  double steer = std::atan2(2.0 * wheelbase * std::sin(alpha), ld_actual);
  steer = std::clamp(steer, -cfg_.max_steer, cfg_.max_steer);

  return {accel, steer};
}

}  // namespace causalfuzz
