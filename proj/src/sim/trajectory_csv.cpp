#include "spikeworks/sim/trajectory_csv.hpp"

#include <charconv>

namespace spikeworks::sim {

std::string format_number(double value)
{
	char buf[32];
	const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
	return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectorySample> samples)
{
	out << "t_ms,x,y,theta\n";
	for (const auto& s : samples)
		out << s.t_ms << ',' << format_number(s.pose.x) << ',' << format_number(s.pose.y) << ','
		    << format_number(s.pose.theta) << '\n';
}

} // namespace spikeworks::sim
