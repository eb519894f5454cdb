#include "spikeworks/sim/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace spikeworks::sim {

double linear_velocity(double v_left, double v_right) { return 0.5 * (v_left + v_right); }

double angular_velocity(double v_left, double v_right, const RobotGeometry& geometry)
{
	return (v_right - v_left) / geometry.axle_length;
}

Pose step_robot(const Pose& pose, double v_left, double v_right, double dt_s,
                const RobotGeometry& geometry)
{
	if (!std::isfinite(pose.x) || !std::isfinite(pose.y) || !std::isfinite(pose.theta) ||
	    !std::isfinite(v_left) || !std::isfinite(v_right) || !std::isfinite(dt_s))
		throw std::invalid_argument("step_robot requires finite inputs");
	if (dt_s <= 0.0)
		throw std::invalid_argument("step_robot requires dt > 0");

	const double v = linear_velocity(v_left, v_right);
	const double w = angular_velocity(v_left, v_right, geometry);
	return {
		pose.x + v * std::cos(pose.theta) * dt_s,
		pose.y + v * std::sin(pose.theta) * dt_s,
		normalize_angle(pose.theta + w * dt_s),
	};
}

} // namespace spikeworks::sim
