#pragma once

#include <cstdint>
#include <vector>

#include "spikeworks/snn/network.hpp"

namespace spikeworks::codec {

// Ticks (0-based, ms) at which the generated train spikes.
using SpikeTrain = std::vector<std::int64_t>;

// Bernoulli(rate/1000) draw per 1 ms tick. Rate must lie in [0, 1000] Hz.
SpikeTrain poisson_injector(double rate_hz, std::int64_t duration_ms, snn::Rng& rng);

// Streaming form of the same process, one draw per tick.
class PoissonSource {
public:
	explicit PoissonSource(double rate_hz);
	bool next(snn::Rng& rng);
	double rate_hz() const { return rate_hz_; }

private:
	double rate_hz_;
};

} // namespace spikeworks::codec
