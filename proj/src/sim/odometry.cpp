#include "spikeworks/sim/odometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spikeworks/sim/kinematics.hpp"

namespace spikeworks::sim {

WheelOdometry::WheelOdometry(const RobotGeometry& geometry) : geometry_(geometry)
{
	geometry_.validate();
}

void WheelOdometry::advance(double v_left, double v_right, double dt_s)
{
	const double circumference = 2.0 * std::numbers::pi * geometry_.wheel_radius;
	revs_left_ += v_left * dt_s / circumference;
	revs_right_ += v_right * dt_s / circumference;
}

std::int64_t WheelOdometry::steps_left() const
{
	return std::llround(revs_left_ * geometry_.steps_per_rev);
}

std::int64_t WheelOdometry::steps_right() const
{
	return std::llround(revs_right_ * geometry_.steps_per_rev);
}

double WheelOdometry::arc_left() const
{
	return revs_left_ * 2.0 * std::numbers::pi * geometry_.wheel_radius;
}

double WheelOdometry::arc_right() const
{
	return revs_right_ * 2.0 * std::numbers::pi * geometry_.wheel_radius;
}

StepEvent WheelOdometry::take_event(std::int64_t now_ms)
{
	const auto left = steps_left();
	const auto right = steps_right();
	StepEvent e{left - reported_left_, right - reported_right_,
	            static_cast<double>(now_ms - last_event_ms_) / 1000.0};
	reported_left_ = left;
	reported_right_ = right;
	last_event_ms_ = now_ms;
	return e;
}

double wheel_speed_from_steps(std::int64_t d_steps, double dt_s, const RobotGeometry& geometry)
{
	return static_cast<double>(d_steps) / (geometry.steps_per_rev / 2.0) * std::numbers::pi *
	       geometry.wheel_radius / dt_s;
}

std::vector<Pose> reconstruct_trajectory(std::span<const StepEvent> events, const Pose& start,
                                         const RobotGeometry& geometry)
{
	std::vector<Pose> path;
	path.reserve(events.size() + 1);
	path.push_back(start);
	for (const auto& e : events) {
		if (!(e.dt_s > 0.0))
			throw std::invalid_argument("step events need dt > 0");
		const double v_l = wheel_speed_from_steps(e.d_steps_left, e.dt_s, geometry);
		const double v_r = wheel_speed_from_steps(e.d_steps_right, e.dt_s, geometry);
		path.push_back(step_robot(path.back(), v_l, v_r, e.dt_s, geometry));
	}
	return path;
}

} // namespace spikeworks::sim
