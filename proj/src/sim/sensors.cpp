#include "spikeworks/sim/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace spikeworks::sim {

std::array<double, kProximitySensors> SensorLayout::default_angles()
{
	constexpr double deg = std::numbers::pi / 180.0;
	return {-15 * deg, -45 * deg, -90 * deg, -150 * deg, 150 * deg, 90 * deg, 45 * deg, 15 * deg};
}

void SensorLayout::validate() const
{
	for (const auto a : angles_rad)
		if (!std::isfinite(a))
			throw std::invalid_argument("sensor angles must be finite");
	if (!(ir_range > 0.0) || !(tof_range > 0.0))
		throw std::invalid_argument("sensor ranges must be positive");
}

double cast_ray(const World& world, const Pose& pose, double bearing, const RobotGeometry& geometry)
{
	const Vec2 dir = unit_from_angle(pose.theta + bearing);
	const Vec2 origin = pose.position() + geometry.body_radius * dir;
	double best = std::numeric_limits<double>::infinity();
	for (const auto& wall : world.walls) {
		const double t = ray_hit_distance(origin, dir, wall);
		if (t >= 0.0)
			best = std::min(best, t);
	}
	return best;
}

SensorFrame read_sensors(const World& world, const Pose& pose, const RobotGeometry& geometry,
                         const SensorLayout& layout)
{
	SensorFrame frame;
	for (std::size_t i = 0; i < kProximitySensors; ++i) {
		const double d = cast_ray(world, pose, layout.angles_rad[i], geometry);
		frame.ps[i] = std::isfinite(d) ? std::clamp(1.0 - d / layout.ir_range, 0.0, 1.0) : 0.0;
	}
	frame.tof = std::min(cast_ray(world, pose, 0.0, geometry), layout.tof_range);
	return frame;
}

double clearance(const World& world, const Pose& pose)
{
	double best = std::numeric_limits<double>::infinity();
	for (const auto& wall : world.walls)
		best = std::min(best, distance_to_segment(pose.position(), wall));
	return best;
}

bool check_collision(const World& world, const Pose& pose, const RobotGeometry& geometry)
{
	return clearance(world, pose) < geometry.body_radius;
}

} // namespace spikeworks::sim
