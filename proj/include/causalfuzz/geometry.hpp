#pragma once

#include <array>
#include <cmath>

namespace causalfuzz {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }
  Vec2 normalized() const;
  Vec2 rotated(double angle) const;
  Vec2 perp_left() const { return {-y, x}; }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Signed wrap to (-pi, pi].
double wrap_angle_signed(double a);
// Wrap to [0, 2*pi).
double wrap_angle_2pi(double a);

// Local frame with +y along `heading` and +x to the right of it.
Vec2 to_local_frame(const Vec2& p, const Vec2& origin, double heading);

// Oriented rectangle: half_length along heading, half_width across it.
struct Obb {
  Vec2 center;
  double heading = 0.0;
  double half_length = 1.0;
  double half_width = 1.0;

  std::array<Vec2, 4> corners() const;
};

// Separating-axis test over the four face normals; touching counts as overlap.
bool obb_intersects(const Obb& a, const Obb& b);

// Shortest distance between the two rectangles; 0 when they overlap or touch.
// Exactly symmetric in its arguments.
double min_bb_distance(const Obb& a, const Obb& b);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);
double segment_segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0,
                                const Vec2& b1);
bool point_in_obb(const Vec2& p, const Obb& box);

// Intersection point of segments [a0,a1] and [b0,b1], if any.
bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0,
                        const Vec2& b1, Vec2* point);

}  // namespace causalfuzz
