#include "spikeworks/runtime/monitor.hpp"

#include <algorithm>
#include <map>

#include "spikeworks/sim/trajectory_csv.hpp"

namespace spikeworks::runtime {

SpikeMonitor::SpikeMonitor(std::string name, std::set<snn::GroupId> groups)
	: name_(std::move(name)), groups_(std::move(groups))
{}

bool SpikeMonitor::watches(snn::GroupId group) const { return groups_.empty() || groups_.contains(group); }

void SpikeMonitor::record(std::span<const snn::SpikeEvent> spikes)
{
	if (!active_)
		return;
	for (const auto& s : spikes)
		if (watches(s.group))
			events_.push_back(s);
}

void write_spike_csv(std::ostream& out, std::span<const snn::SpikeEvent> events, const snn::Network& network)
{
	std::vector<snn::SpikeEvent> sorted(events.begin(), events.end());
	std::sort(sorted.begin(), sorted.end());
	out << "t_ms,group,neuron\n";
	for (const auto& e : sorted)
		out << e.time_ms << ',' << network.group(e.group).name << ',' << e.index << '\n';
}

void write_rate_summary(std::ostream& out, std::span<const snn::SpikeEvent> events,
                        const snn::Network& network, std::uint32_t bin_ms, std::int64_t duration_ms)
{
	const auto bins = static_cast<std::size_t>((duration_ms + bin_ms - 1) / bin_ms);
	std::map<std::uint32_t, std::vector<std::uint64_t>> counts;
	for (const auto& g : network.groups())
		counts[g.id.value].assign(bins, 0);
	for (const auto& e : events) {
		if (e.time_ms < 0 || e.time_ms >= duration_ms)
			continue;
		++counts[e.group.value][static_cast<std::size_t>(e.time_ms / bin_ms)];
	}

	out << "bin_start_ms,group,rate_hz\n";
	for (std::size_t b = 0; b < bins; ++b) {
		const auto start = static_cast<std::int64_t>(b) * bin_ms;
		const auto width = std::min<std::int64_t>(bin_ms, duration_ms - start);
		for (const auto& g : network.groups()) {
			const double rate = 1000.0 * static_cast<double>(counts[g.id.value][b]) /
			                    (static_cast<double>(width) * g.size);
			out << start << ',' << g.name << ',' << sim::format_number(rate) << '\n';
		}
	}
}

} // namespace spikeworks::runtime
