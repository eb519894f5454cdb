#pragma once

#include <cstdint>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "spikeworks/snn/network.hpp"

namespace spikeworks::runtime {

// Passive recorder of spike events for a set of groups.
class SpikeMonitor {
public:
	SpikeMonitor(std::string name, std::set<snn::GroupId> groups);

	const std::string& name() const { return name_; }
	// Empty set watches every group.
	const std::set<snn::GroupId>& groups() const { return groups_; }
	bool watches(snn::GroupId group) const;

	bool active() const { return active_; }
	void start() { active_ = true; }
	void stop() { active_ = false; }

	void record(std::span<const snn::SpikeEvent> spikes);
	const std::vector<snn::SpikeEvent>& events() const { return events_; }
	void clear() { events_.clear(); }

private:
	std::string name_;
	std::set<snn::GroupId> groups_;
	bool active_ = true;
	std::vector<snn::SpikeEvent> events_;
};

// "t_ms,group,neuron", sorted by time, then group, then neuron.
void write_spike_csv(std::ostream& out, std::span<const snn::SpikeEvent> events, const snn::Network& network);

// "bin_start_ms,group,rate_hz": mean per-neuron rate of every group in
// consecutive bins covering [0, duration_ms).
void write_rate_summary(std::ostream& out, std::span<const snn::SpikeEvent> events,
                        const snn::Network& network, std::uint32_t bin_ms, std::int64_t duration_ms);

} // namespace spikeworks::runtime
