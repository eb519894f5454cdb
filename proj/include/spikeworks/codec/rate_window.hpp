#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

namespace spikeworks::codec {

// Sliding-window spike counter for a small population.
//
// The window covers the ticks (end - length, end]. Each neuron contributes at
// most one spike per tick, so estimated rates stay within [0, 1000] Hz.
class RateWindow {
public:
	explicit RateWindow(std::size_t neurons = 1, std::uint32_t length_ms = 100);

	// Closes tick `time_ms` with the given neuron indices firing. Ticks must be
	// pushed in strictly increasing order.
	void push_tick(std::int64_t time_ms, std::span<const std::uint32_t> fired);

	std::uint32_t length_ms() const { return length_ms_; }
	std::size_t neurons() const { return counts_.size(); }
	// Last tick covered; -1 when nothing has been pushed yet.
	std::int64_t end_ms() const { return end_ms_; }

	std::uint32_t count(std::size_t neuron) const { return counts_.at(neuron); }
	double rate_hz(std::size_t neuron) const;
	// Mean rate over all neurons of the window.
	double population_rate_hz() const;

	void clear();

private:
	struct Entry {
		std::int64_t time_ms;
		std::uint32_t neuron;
	};

	std::uint32_t length_ms_;
	std::int64_t end_ms_ = -1;
	std::vector<std::uint32_t> counts_;
	std::deque<Entry> entries_;
};

} // namespace spikeworks::codec
