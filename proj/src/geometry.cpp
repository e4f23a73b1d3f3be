#include "causalfuzz/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace causalfuzz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

// Lexicographic order so min_bb_distance can canonicalize its arguments.
bool obb_less(const Obb& a, const Obb& b) {
  if (a.center.x != b.center.x) return a.center.x < b.center.x;
  if (a.center.y != b.center.y) return a.center.y < b.center.y;
  if (a.heading != b.heading) return a.heading < b.heading;
  if (a.half_length != b.half_length) return a.half_length < b.half_length;
  return a.half_width < b.half_width;
}

}  // namespace

Vec2 Vec2::normalized() const {
  const double n = norm();
  if (n < 1e-12) return {1.0, 0.0};
  return {x / n, y / n};
}

Vec2 Vec2::rotated(double angle) const {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {x * c - y * s, x * s + y * c};
}

double wrap_angle_signed(double a) {
  a = std::fmod(a, kTwoPi);
  if (a > std::numbers::pi_v<double>) a -= kTwoPi;
  if (a <= -std::numbers::pi_v<double>) a += kTwoPi;
  return a;
}

double wrap_angle_2pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

Vec2 to_local_frame(const Vec2& p, const Vec2& origin, double heading) {
  const Vec2 d = p - origin;
  const Vec2 forward{std::cos(heading), std::sin(heading)};
  const Vec2 right{std::sin(heading), -std::cos(heading)};
  return {d.dot(right), d.dot(forward)};
}

std::array<Vec2, 4> Obb::corners() const {
  const Vec2 fwd{std::cos(heading), std::sin(heading)};
  const Vec2 left = fwd.perp_left();
  const Vec2 dl = fwd * half_length;
  const Vec2 dw = left * half_width;
  return {center + dl + dw, center + dl - dw, center - dl - dw,
          center - dl + dw};
}

bool obb_intersects(const Obb& a, const Obb& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const std::array<Vec2, 4> axes = {
      Vec2{std::cos(a.heading), std::sin(a.heading)},
      Vec2{-std::sin(a.heading), std::cos(a.heading)},
      Vec2{std::cos(b.heading), std::sin(b.heading)},
      Vec2{-std::sin(b.heading), std::cos(b.heading)}};
  for (const Vec2& axis : axes) {
    double amin = std::numeric_limits<double>::infinity(), amax = -amin;
    double bmin = amin, bmax = -amin;
    for (int i = 0; i < 4; ++i) {
      const double pa = ca[i].dot(axis);
      const double pb = cb[i].dot(axis);
      amin = std::min(amin, pa);
      amax = std::max(amax, pa);
      bmin = std::min(bmin, pb);
      bmax = std::max(bmax, pb);
    }
    if (amax < bmin || bmax < amin) return false;
  }
  return true;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len_sq = ab.norm_sq();
  if (len_sq < 1e-18) return distance(p, a);
  double t = (p - a).dot(ab) / len_sq;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + ab * t);
}

double segment_segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0,
                                const Vec2& b1) {
  if (segments_intersect(a0, a1, b0, b1, nullptr)) return 0.0;
  double d = point_segment_distance(a0, b0, b1);
  d = std::min(d, point_segment_distance(a1, b0, b1));
  d = std::min(d, point_segment_distance(b0, a0, a1));
  d = std::min(d, point_segment_distance(b1, a0, a1));
  return d;
}

bool point_in_obb(const Vec2& p, const Obb& box) {
  const Vec2 local = to_local_frame(p, box.center, box.heading);
  return std::abs(local.x) <= box.half_width + 1e-12 &&
         std::abs(local.y) <= box.half_length + 1e-12;
}

bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0,
                        const Vec2& b1, Vec2* point) {
  const Vec2 r = a1 - a0;
  const Vec2 s = b1 - b0;
  const double denom = r.cross(s);
  const Vec2 qp = b0 - a0;
  if (std::abs(denom) < 1e-14) {
    if (std::abs(qp.cross(r)) > 1e-12) return false;
    // Collinear: overlap test on the parameter of a.
    const double rr = r.norm_sq();
    if (rr < 1e-18) {
      if (point_segment_distance(a0, b0, b1) < 1e-12) {
        if (point) *point = a0;
        return true;
      }
      return false;
    }
    double t0 = qp.dot(r) / rr;
    double t1 = (b1 - a0).dot(r) / rr;
    if (t0 > t1) std::swap(t0, t1);
    if (t1 < 0.0 || t0 > 1.0) return false;
    if (point) *point = a0 + r * std::clamp(t0, 0.0, 1.0);
    return true;
  }
  const double t = qp.cross(s) / denom;
  const double u = qp.cross(r) / denom;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return false;
  if (point) *point = a0 + r * t;
  return true;
}

double min_bb_distance(const Obb& a, const Obb& b) {
  if (obb_less(b, a)) return min_bb_distance(b, a);
  if (obb_intersects(a, b)) return 0.0;
  const auto ca = a.corners();
  const auto cb = b.corners();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    const Vec2& p0 = ca[i];
    const Vec2& p1 = ca[(i + 1) % 4];
    for (int j = 0; j < 4; ++j) {
      best = std::min(best, segment_segment_distance(p0, p1, cb[j],
                                                     cb[(j + 1) % 4]));
    }
  }
  return best;
}

}  // namespace causalfuzz
