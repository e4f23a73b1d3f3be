#include "causalfuzz/map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace causalfuzz {

namespace {

void ensure_index(const Lane& lane) {
  if (lane.cumulative_s.size() != lane.centerline.size())
    throw std::logic_error("lane '" + lane.id +
                           "' used before MapSpec::build_index()");
}

}  // namespace

double Lane::length() const {
  ensure_index(*this);
  return cumulative_s.back();
}

Vec2 Lane::point_at(double s) const {
  ensure_index(*this);
  s = std::clamp(s, 0.0, cumulative_s.back());
  auto it = std::upper_bound(cumulative_s.begin(), cumulative_s.end(), s);
  std::size_t seg = it == cumulative_s.begin()
                        ? 0
                        : static_cast<std::size_t>(it - cumulative_s.begin()) - 1;
  seg = std::min(seg, centerline.size() - 2);
  const double seg_len = cumulative_s[seg + 1] - cumulative_s[seg];
  const double t = seg_len > 1e-12 ? (s - cumulative_s[seg]) / seg_len : 0.0;
  return centerline[seg] + (centerline[seg + 1] - centerline[seg]) * t;
}

Vec2 Lane::tangent_at(double s) const {
  ensure_index(*this);
  s = std::clamp(s, 0.0, cumulative_s.back());
  auto it = std::upper_bound(cumulative_s.begin(), cumulative_s.end(), s);
  std::size_t seg = it == cumulative_s.begin()
                        ? 0
                        : static_cast<std::size_t>(it - cumulative_s.begin()) - 1;
  seg = std::min(seg, centerline.size() - 2);
  return (centerline[seg + 1] - centerline[seg]).normalized();
}

double Lane::heading_at(double s) const {
  const Vec2 t = tangent_at(s);
  return std::atan2(t.y, t.x);
}

Lane::Projection Lane::project(const Vec2& p) const {
  ensure_index(*this);
  Projection best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t seg = 0; seg + 1 < centerline.size(); ++seg) {
    const Vec2& a = centerline[seg];
    const Vec2& b = centerline[seg + 1];
    const Vec2 ab = b - a;
    const double len_sq = ab.norm_sq();
    double t = len_sq > 1e-18 ? (p - a).dot(ab) / len_sq : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 q = a + ab * t;
    const double d = distance(p, q);
    if (d < best.distance) {
      best.distance = d;
      best.s = cumulative_s[seg] + t * std::sqrt(len_sq);
      // cross(tangent, offset) > 0 means p lies left of travel
      best.lateral = ab.normalized().cross(p - q) >= 0.0 ? d : -d;
    }
  }
  return best;
}

void MapSpec::build_index() {
  for (Lane& lane : lanes) {
    lane.cumulative_s.assign(lane.centerline.size(), 0.0);
    for (std::size_t i = 1; i < lane.centerline.size(); ++i) {
      lane.cumulative_s[i] = lane.cumulative_s[i - 1] +
                             distance(lane.centerline[i - 1], lane.centerline[i]);
    }
  }
}

const Lane* MapSpec::find(const std::string& id) const {
  for (const Lane& lane : lanes)
    if (lane.id == id) return &lane;
  return nullptr;
}

Lane* MapSpec::find(const std::string& id) {
  for (Lane& lane : lanes)
    if (lane.id == id) return &lane;
  return nullptr;
}

const Lane* MapSpec::nearest_lane(const Vec2& p) const {
  const Lane* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const Lane& lane : lanes) {
    const double d = lane.project(p).distance;
    if (d < best_d) {
      best_d = d;
      best = &lane;
    }
  }
  return best;
}

const Lane* MapSpec::nearest_lane_aligned(const Vec2& p, double heading) const {
  const Lane* best = nullptr;
  double best_score = std::numeric_limits<double>::infinity();
  for (const Lane& lane : lanes) {
    const auto proj = lane.project(p);
    const double align =
        std::abs(wrap_angle_signed(lane.heading_at(proj.s) - heading));
    const bool inside = proj.distance <= lane.width * 0.5 + 0.3;
    // Inside lanes compete on alignment; outside ones on distance.
    const double score = inside ? align : 100.0 + proj.distance;
    if (score < best_score) {
      best_score = score;
      best = &lane;
    }
  }
  return best;
}

bool MapSpec::on_map(const Vec2& p, double margin) const {
  for (const Lane& lane : lanes) {
    if (lane.project(p).distance <= lane.width * 0.5 + margin) return true;
  }
  return false;
}

void MapSpec::validate() const {
  if (lanes.empty()) throw std::invalid_argument("map: no lanes");
  for (const Lane& lane : lanes) {
    if (lane.width <= 0.0)
      throw std::invalid_argument("map: lane '" + lane.id +
                                  "' has non-positive width");
    if (lane.centerline.size() < 2)
      throw std::invalid_argument("map: lane '" + lane.id +
                                  "' needs >= 2 centerline points");
    for (const auto& nb : {lane.left, lane.right}) {
      if (!nb) continue;
      const Lane* other = find(nb->id);
      if (!other)
        throw std::invalid_argument("map: lane '" + lane.id +
                                    "' references unknown neighbor '" +
                                    nb->id + "'");
      const bool back =
          (other->left && other->left->id == lane.id &&
           other->left->same_direction == nb->same_direction) ||
          (other->right && other->right->id == lane.id &&
           other->right->same_direction == nb->same_direction);
      if (!back)
        throw std::invalid_argument("map: adjacency between '" + lane.id +
                                    "' and '" + nb->id + "' not symmetric");
    }
  }
}

}  // namespace causalfuzz
