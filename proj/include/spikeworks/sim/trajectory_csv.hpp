#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>

#include "spikeworks/sim/geometry.hpp"

namespace spikeworks::sim {

struct TrajectorySample {
	std::int64_t t_ms = 0;
	Pose pose;
};

// Shortest round-trip decimal form of a double.
std::string format_number(double value);

// CSV with header "t_ms,x,y,theta".
void write_trajectory_csv(std::ostream& out, std::span<const TrajectorySample> samples);

} // namespace spikeworks::sim
