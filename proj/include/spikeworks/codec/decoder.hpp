#pragma once

#include "spikeworks/codec/rate_window.hpp"

namespace spikeworks::codec {

struct DecoderConfig {
	double k = 0.0012;   // m/s per Hz of rate difference
	double v_max = 0.12; // m/s

	void validate() const;
};

struct WheelCommand {
	double v_left = 0.0;  // m/s
	double v_right = 0.0; // m/s

	friend bool operator==(const WheelCommand&, const WheelCommand&) = default;
};

// Signed wheel velocity from an antagonistic pair of motor populations:
// clamp(k * (rate_fwd - rate_bwd), -v_max, v_max). Throws
// std::invalid_argument when the two windows do not cover the same span.
double decode_wheel(const RateWindow& forward, const RateWindow& backward, const DecoderConfig& cfg);

// Same formula without the clamp; used to reason about monotonicity.
double decode_wheel_unclamped(const RateWindow& forward, const RateWindow& backward,
                              const DecoderConfig& cfg);

} // namespace spikeworks::codec
