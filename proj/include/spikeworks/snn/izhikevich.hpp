#pragma once

#include <stdexcept>

namespace spikeworks::snn {

// Spike detection threshold of the membrane potential. Values above it
// trigger the reset; recorded peaks are capped at this value.
constexpr double kSpikeThreshold = 30.0;

// Simulation tick. The integrator is written for exactly this step.
constexpr double kTickMs = 1.0;

// Four-parameter Izhikevich neuron:
//
//    v' = 0.04 v^2 + 5 v + 140 - u + I
//    u' = a (b v - u)
//    if v > 30: v <- c, u <- u + d
//
// All quantities are dimensionless (v is mV-scaled, time in ms).
struct IzhikevichParams {
	double a = 0.02;  // time scale of the recovery variable
	double b = 0.2;   // sensitivity of u to subthreshold v
	double c = -65.0; // after-spike reset of v
	double d = 8.0;   // after-spike increment of u

	static constexpr IzhikevichParams regular_spiking() { return {0.02, 0.2, -65.0, 8.0}; }

	// Throws std::invalid_argument unless a > 0 and c < threshold.
	void validate() const;

	friend bool operator==(const IzhikevichParams&, const IzhikevichParams&) = default;
};

struct NeuronState {
	double v = -70.0;
	double u = -14.0;

	friend bool operator==(const NeuronState&, const NeuronState&) = default;
};

struct StepResult {
	NeuronState state;
	bool fired = false;
	// Membrane potential before any reset, capped at kSpikeThreshold.
	double recorded_v = 0.0;
};

// Raised when a state variable or input current stops being finite.
class IntegrityError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// Resting state used for fresh neurons: v = -70, u = b v. For the
// regular-spiking parameters this is the exact fixed point at I = 0.
NeuronState resting_state(const IzhikevichParams& params);

// Advances one neuron by one 1 ms tick.
//
// v is integrated with two explicit Euler half-steps of 0.5 ms, u with a single
// full step using the updated v. A neuron entering the tick above threshold
// (or crossing it during integration) fires: v <- c and u <- u + d, with no
// recovery update in that tick.
StepResult step_neuron(const NeuronState& state, const IzhikevichParams& params, double current);

} // namespace spikeworks::snn
