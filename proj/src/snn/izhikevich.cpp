#include "spikeworks/snn/izhikevich.hpp"

#include <algorithm>
#include <cmath>

namespace spikeworks::snn {

namespace {

double membrane_derivative(double v, double u, double current)
{
	return 0.04 * v * v + 5.0 * v + 140.0 - u + current;
}

} // namespace

void IzhikevichParams::validate() const
{
	if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
		throw std::invalid_argument("izhikevich parameters must be finite");
	if (a <= 0.0)
		throw std::invalid_argument("izhikevich parameter a must be positive");
	if (c >= kSpikeThreshold)
		throw std::invalid_argument("izhikevich reset c must lie below the spike threshold");
}

NeuronState resting_state(const IzhikevichParams& params)
{
	constexpr double v_rest = -70.0;
	return {v_rest, params.b * v_rest};
}

StepResult step_neuron(const NeuronState& state, const IzhikevichParams& params, double current)
{
	if (!std::isfinite(state.v) || !std::isfinite(state.u) || !std::isfinite(current))
		throw IntegrityError("non-finite neuron state or input current");

	const auto fire = [&](double peak) {
		StepResult r;
		r.state = {params.c, state.u + params.d};
		r.fired = true;
		r.recorded_v = std::min(peak, kSpikeThreshold);
		return r;
	};

	if (state.v > kSpikeThreshold)
		return fire(state.v);

	double v = state.v;
	constexpr double half_step = 0.5 * kTickMs;
	for (int i = 0; i < 2; ++i) {
		v += half_step * membrane_derivative(v, state.u, current);
		if (v > kSpikeThreshold)
			return fire(v);
	}
	if (!std::isfinite(v))
		throw IntegrityError("membrane potential diverged");

	StepResult r;
	r.state = {v, state.u + kTickMs * params.a * (params.b * v - state.u)};
	r.recorded_v = v;
	return r;
}

} // namespace spikeworks::snn
