#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causalfuzz/geometry.hpp"

namespace causalfuzz {

struct LaneNeighbor {
  std::string id;
  bool same_direction = true;
};

struct Lane {
  std::string id;
  double width = 3.5;
  std::string direction;          // free-form tag, e.g. "east"
  std::vector<Vec2> centerline;   // >= 2 points, meters
  std::optional<LaneNeighbor> left;
  std::optional<LaneNeighbor> right;

  struct Projection {
    double s = 0.0;        // arc length along the centerline
    double lateral = 0.0;  // signed offset, left of travel positive
    double distance = 0.0; // unsigned distance to the centerline
  };

  double length() const;
  Vec2 point_at(double s) const;
  Vec2 tangent_at(double s) const;  // unit vector
  double heading_at(double s) const;
  Projection project(const Vec2& p) const;

  // Populated by MapSpec::build_index().
  std::vector<double> cumulative_s;
};

struct MapSpec {
  std::vector<Lane> lanes;

  // Precomputes arc-length tables; call after mutation of lane geometry.
  void build_index();
  const Lane* find(const std::string& id) const;
  Lane* find(const std::string& id);
  // Lane whose centerline is closest to p.
  const Lane* nearest_lane(const Vec2& p) const;
  // Prefers lanes whose travel direction aligns with heading; among those
  // within their own width, picks the best-aligned one.
  const Lane* nearest_lane_aligned(const Vec2& p, double heading) const;
  bool on_map(const Vec2& p, double margin = 0.5) const;
  // Throws std::invalid_argument on broken invariants.
  void validate() const;
};

}  // namespace causalfuzz
