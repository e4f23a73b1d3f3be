#include "causalfuzz/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace causalfuzz {

Obb bounding_box(const VehicleState& v) {
  return Obb{v.position, v.heading, v.length * 0.5, v.width * 0.5};
}

VehicleState step_kinematics(const VehicleState& state, const Command& cmd,
                             double dt) {
  if (dt <= 0.0) throw std::invalid_argument("step_kinematics: dt must be > 0");
  VehicleState next = state;
  const double v_new = std::max(0.0, state.speed + cmd.accel * dt);
  const double v_mid = 0.5 * (state.speed + v_new);
  const double wheelbase = std::max(0.5, 0.6 * state.length);
  const double yaw_rate = v_mid / wheelbase * std::tan(cmd.steer);
  const double h_new = state.heading + yaw_rate * dt;
  const double h_mid = state.heading + 0.5 * yaw_rate * dt;
  next.position = state.position +
                  Vec2{std::cos(h_mid), std::sin(h_mid)} * (v_mid * dt);
  next.heading = wrap_angle_2pi(h_new);
  next.speed = v_new;
  next.accel = (v_new - state.speed) / dt;
  return next;
}

}  // namespace causalfuzz
