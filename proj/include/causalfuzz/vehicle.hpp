#pragma once

#include "causalfuzz/geometry.hpp"

namespace causalfuzz {

struct VehicleState {
  Vec2 position;         // meters
  double heading = 0.0;  // rad, normalized to [0, 2*pi)
  double speed = 0.0;    // m/s, never negative
  double accel = 0.0;    // realized acceleration of the last step, m/s^2
  double length = 4.6;   // meters
  double width = 2.0;    // meters
};

Obb bounding_box(const VehicleState& v);

struct Command {
  double accel = 0.0;  // m/s^2
  double steer = 0.0;  // rad, front-wheel angle
};

// Kinematic bicycle step. Speed clamps at zero (no reverse); the position
// advances at the midpoint speed and the stored accel is the realized one.
VehicleState step_kinematics(const VehicleState& state, const Command& cmd,
                             double dt);

}  // namespace causalfuzz
