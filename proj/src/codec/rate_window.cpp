#include "spikeworks/codec/rate_window.hpp"

#include <algorithm>
#include <stdexcept>

namespace spikeworks::codec {

RateWindow::RateWindow(std::size_t neurons, std::uint32_t length_ms)
	: length_ms_(length_ms), counts_(neurons, 0)
{
	if (neurons == 0)
		throw std::invalid_argument("rate window needs at least one neuron");
	if (length_ms == 0)
		throw std::invalid_argument("rate window length must be positive");
}

void RateWindow::push_tick(std::int64_t time_ms, std::span<const std::uint32_t> fired)
{
	if (end_ms_ >= 0 && time_ms <= end_ms_)
		throw std::invalid_argument("rate window ticks must increase");

	std::vector<bool> seen(counts_.size(), false);
	for (const auto n : fired) {
		if (n >= counts_.size())
			throw std::out_of_range("spike for a neuron outside the window");
		if (seen[n])
			throw std::invalid_argument("a neuron can fire at most once per tick");
		seen[n] = true;
	}

	end_ms_ = time_ms;
	const auto oldest = end_ms_ - static_cast<std::int64_t>(length_ms_);
	while (!entries_.empty() && entries_.front().time_ms <= oldest) {
		--counts_[entries_.front().neuron];
		entries_.pop_front();
	}
	for (const auto n : fired) {
		entries_.push_back({time_ms, n});
		++counts_[n];
	}
}

double RateWindow::rate_hz(std::size_t neuron) const
{
	return 1000.0 * count(neuron) / length_ms_;
}

double RateWindow::population_rate_hz() const
{
	double total = 0.0;
	for (const auto c : counts_)
		total += c;
	return 1000.0 * total / (static_cast<double>(length_ms_) * counts_.size());
}

void RateWindow::clear()
{
	entries_.clear();
	std::fill(counts_.begin(), counts_.end(), 0u);
	end_ms_ = -1;
}

} // namespace spikeworks::codec
