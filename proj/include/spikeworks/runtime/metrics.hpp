#pragma once

#include <cstddef>
#include <span>

#include "spikeworks/sim/trajectory_csv.hpp"

namespace spikeworks::runtime {

// Counts how often the heading swings more than 90 degrees away from the
// heading recorded at the previous reversal (the first sample initially).
std::size_t count_heading_reversals(std::span<const sim::TrajectorySample> samples);

// Sum of straight-line distances between consecutive samples.
double polyline_length(std::span<const sim::TrajectorySample> samples);

} // namespace spikeworks::runtime
