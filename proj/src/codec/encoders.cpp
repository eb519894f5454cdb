#include "spikeworks/codec/encoders.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spikeworks::codec {

void EncoderConfig::validate() const
{
	if (!std::isfinite(gain) || !std::isfinite(bias) || !std::isfinite(saturation))
		throw std::invalid_argument("encoder parameters must be finite");
	if (gain < 0.0)
		throw std::invalid_argument("encoder gain must be non-negative");
	if (saturation < bias)
		throw std::invalid_argument("encoder saturation must not be below the bias");
}

double encode_proximity(double normalized, const EncoderConfig& cfg)
{
	const double x = std::isnan(normalized) ? 0.0 : std::clamp(normalized, 0.0, 1.0);
	return std::min(cfg.bias + cfg.gain * x, cfg.saturation);
}

void TofEncoderConfig::validate() const
{
	if (!(gain_clear >= 0.0) || !(gain_obstacle >= 0.0))
		throw std::invalid_argument("tof gains must be non-negative");
	if (!(d_stop > 0.0) || !(d_safe > d_stop))
		throw std::invalid_argument("tof distances must satisfy 0 < d_stop < d_safe");
	if (!(range_max >= d_safe) || !std::isfinite(range_max))
		throw std::invalid_argument("tof range must cover d_safe");
}

TofCurrents encode_tof(double distance, const TofEncoderConfig& cfg)
{
	if (!std::isfinite(distance) || distance < 0.0)
		throw std::invalid_argument("tof distance must be a non-negative number");
	const double d = std::min(distance, cfg.range_max);
	return {
		cfg.gain_clear * std::clamp(d / cfg.d_safe, 0.0, 1.0),
		cfg.gain_obstacle * std::clamp(1.0 - d / cfg.d_stop, 0.0, 1.0),
	};
}

} // namespace spikeworks::codec
