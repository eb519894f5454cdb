#include "spikeworks/runtime/metrics.hpp"

#include <cmath>

namespace spikeworks::runtime {

std::size_t count_heading_reversals(std::span<const sim::TrajectorySample> samples)
{
	if (samples.empty())
		return 0;
	std::size_t reversals = 0;
	double anchor = samples.front().pose.theta;
	for (const auto& s : samples) {
		if (std::cos(s.pose.theta - anchor) < 0.0) {
			++reversals;
			anchor = s.pose.theta;
		}
	}
	return reversals;
}

double polyline_length(std::span<const sim::TrajectorySample> samples)
{
	double total = 0.0;
	for (std::size_t i = 1; i < samples.size(); ++i)
		total += std::hypot(samples[i].pose.x - samples[i - 1].pose.x, samples[i].pose.y - samples[i - 1].pose.y);
	return total;
}

} // namespace spikeworks::runtime
