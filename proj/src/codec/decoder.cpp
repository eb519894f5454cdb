#include "spikeworks/codec/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spikeworks::codec {

void DecoderConfig::validate() const
{
	if (!std::isfinite(k) || k < 0.0)
		throw std::invalid_argument("decoder gain k must be non-negative");
	if (!std::isfinite(v_max) || v_max <= 0.0)
		throw std::invalid_argument("decoder v_max must be positive");
}

double decode_wheel_unclamped(const RateWindow& forward, const RateWindow& backward,
                              const DecoderConfig& cfg)
{
	if (forward.length_ms() != backward.length_ms() || forward.end_ms() != backward.end_ms())
		throw std::invalid_argument("forward and backward windows cover different spans");
	return cfg.k * (forward.population_rate_hz() - backward.population_rate_hz());
}

double decode_wheel(const RateWindow& forward, const RateWindow& backward, const DecoderConfig& cfg)
{
	return std::clamp(decode_wheel_unclamped(forward, backward, cfg), -cfg.v_max, cfg.v_max);
}

} // namespace spikeworks::codec
