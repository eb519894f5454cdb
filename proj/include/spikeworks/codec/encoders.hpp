#pragma once

namespace spikeworks::codec {

// Linear, saturating transfer from a normalized reading to an input current.
struct EncoderConfig {
	double gain = 15.0;
	double bias = 0.0;
	double saturation = 15.0;

	// Requires gain >= 0 and saturation >= bias.
	void validate() const;
};

// current = min(bias + gain * clamp(normalized, 0, 1), saturation)
double encode_proximity(double normalized, const EncoderConfig& cfg);

// The time-of-flight ranger feeds two sensory neurons: a "clear" channel that
// grows with free distance up to d_safe, and an "obstacle" channel that grows
// as the distance falls below d_stop.
struct TofEncoderConfig {
	double gain_clear = 130.0;
	double gain_obstacle = 5.0;
	double d_stop = 0.10;  // m
	double d_safe = 0.50;  // m
	double range_max = 2.0; // m

	void validate() const;
};

struct TofCurrents {
	double clear = 0.0;
	double obstacle = 0.0;
};

// Throws std::invalid_argument for negative or non-finite distances.
TofCurrents encode_tof(double distance, const TofEncoderConfig& cfg);

} // namespace spikeworks::codec
