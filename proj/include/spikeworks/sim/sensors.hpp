#pragma once

#include <array>
#include <cstdint>

#include "spikeworks/sim/geometry.hpp"
#include "spikeworks/sim/world.hpp"

namespace spikeworks::sim {

constexpr std::size_t kProximitySensors = 8;

// Mounting angles of the IR proximity sensors relative to the heading,
// negative to the right. The defaults place ps0/ps7 at the front, ps1 at
// front-right and ps6 at front-left.
struct SensorLayout {
	std::array<double, kProximitySensors> angles_rad = default_angles();
	double ir_range = 0.06;  // m, reading falls linearly to 0 at this distance
	double tof_range = 2.0;  // m

	static std::array<double, kProximitySensors> default_angles();
	void validate() const;
};

struct SensorFrame {
	std::array<double, kProximitySensors> ps{};
	double tof = 2.0;
	std::int64_t timestamp_ms = 0;
};

// Distance from the body surface along `bearing` (relative to the heading)
// to the nearest wall, or +infinity if nothing is hit.
double cast_ray(const World& world, const Pose& pose, double bearing, const RobotGeometry& geometry);

SensorFrame read_sensors(const World& world, const Pose& pose, const RobotGeometry& geometry,
                         const SensorLayout& layout = {});

// Distance from the robot centre to the closest wall (+infinity if none).
double clearance(const World& world, const Pose& pose);

// True iff the centre lies strictly closer than body_radius to any wall.
bool check_collision(const World& world, const Pose& pose, const RobotGeometry& geometry);

} // namespace spikeworks::sim
