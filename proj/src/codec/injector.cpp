#include "spikeworks/codec/injector.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace spikeworks::codec {

PoissonSource::PoissonSource(double rate_hz) : rate_hz_(rate_hz)
{
	if (!std::isfinite(rate_hz) || rate_hz < 0.0 || rate_hz > 1000.0)
		throw std::invalid_argument("injector rate must lie in [0, 1000] Hz");
}

bool PoissonSource::next(snn::Rng& rng)
{
	std::bernoulli_distribution draw(rate_hz_ / 1000.0);
	return draw(rng);
}

SpikeTrain poisson_injector(double rate_hz, std::int64_t duration_ms, snn::Rng& rng)
{
	if (duration_ms < 0)
		throw std::invalid_argument("injector duration must be non-negative");
	PoissonSource source(rate_hz);
	SpikeTrain train;
	for (std::int64_t t = 0; t < duration_ms; ++t)
		if (source.next(rng))
			train.push_back(t);
	return train;
}

} // namespace spikeworks::codec
