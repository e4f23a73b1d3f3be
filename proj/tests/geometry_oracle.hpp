#pragma once

// Test-only point-sampling oracle for the rectangle-distance kernel. Kept
// independent of the implementation path it checks: exact point-to-segment
// distances from densely sampled boundary points, overlap by containment or
// boundary crossing.
#include <algorithm>
#include <array>

#include "causalfuzz/geometry.hpp"
#include "causalfuzz/rng.hpp"

namespace causalfuzz::testing {

inline double sampled_obb_distance(const Obb& a, const Obb& b,
                                   int samples = 10000) {
  if (point_in_obb(a.center, b) || point_in_obb(b.center, a)) return 0.0;
  const auto ca = a.corners();
  const auto cb = b.corners();
  for (const Vec2& c : ca)
    if (point_in_obb(c, b)) return 0.0;
  for (const Vec2& c : cb)
    if (point_in_obb(c, a)) return 0.0;

  const auto boundary_point = [](const std::array<Vec2, 4>& corners, double t) {
    const double scaled = t * 4.0;
    const int edge = std::min(3, static_cast<int>(scaled));
    const double u = scaled - edge;
    return corners[edge] + (corners[(edge + 1) % 4] - corners[edge]) * u;
  };
  const auto min_to_boundary = [](const Vec2& p,
                                  const std::array<Vec2, 4>& corners) {
    double best = point_segment_distance(p, corners[0], corners[1]);
    for (int e = 1; e < 4; ++e)
      best = std::min(best,
                      point_segment_distance(p, corners[e], corners[(e + 1) % 4]));
    return best;
  };

  double best = 1e300;
  for (int i = 0; i < samples; ++i) {
    const double t = (i + 0.5) / samples;
    best = std::min(best, min_to_boundary(boundary_point(ca, t), cb));
    best = std::min(best, min_to_boundary(boundary_point(cb, t), ca));
  }
  return best;
}

inline Obb random_obb(Rng& rng) {
  Obb box;
  box.center = {rng.uniform(-12, 12), rng.uniform(-12, 12)};
  box.heading = rng.uniform(0, 6.2831853);
  box.half_length = rng.uniform(0.8, 3.0);
  box.half_width = rng.uniform(0.5, 1.5);
  return box;
}

}  // namespace causalfuzz::testing
