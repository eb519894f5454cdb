#pragma once

#include "spikeworks/sim/geometry.hpp"

namespace spikeworks::sim {

// Unicycle velocities of the differential drive: v = (v_l + v_r) / 2 and a
// yaw rate of (v_r - v_l) / l, so a faster right wheel turns the robot
// counterclockwise (to the left).
double linear_velocity(double v_left, double v_right);
double angular_velocity(double v_left, double v_right, const RobotGeometry& geometry);

// One explicit Euler step of the no-slip model:
//   x += v cos(theta) dt, y += v sin(theta) dt, theta += w dt
// Throws std::invalid_argument for non-finite inputs or dt <= 0.
Pose step_robot(const Pose& pose, double v_left, double v_right, double dt_s,
                const RobotGeometry& geometry);

} // namespace spikeworks::sim
