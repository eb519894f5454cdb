#include "spikeworks/braitenberg/epuck_network.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spikeworks::braitenberg {

std::string_view to_string(Side side) { return side == Side::left ? "left" : "right"; }

Side opposite(Side side) { return side == Side::left ? Side::right : Side::left; }

Side side_of(std::size_t sensor_index, const sim::SensorLayout& layout)
{
	if (sensor_index >= layout.angles_rad.size())
		throw std::out_of_range("proximity sensor index out of range");
	const double a = sim::normalize_angle(layout.angles_rad[sensor_index]);
	if (a == 0.0 || a == std::numbers::pi)
		throw std::invalid_argument("sensor " + std::to_string(sensor_index) + " lies on the axis and has no side");
	return a < 0.0 ? Side::right : Side::left;
}

EpuckNetwork build_epuck_network(const BraitenbergConfig& cfg)
{
	return build_epuck_network(snn::Network{}, cfg);
}

EpuckNetwork build_epuck_network(snn::Network network, const BraitenbergConfig& cfg)
{
	cfg.layout.validate();
	if (!(cfg.excitatory_weight > 0.0))
		throw std::invalid_argument("excitatory weight must be positive");

	using snn::NeuronKind;
	EpuckNetwork net;
	net.ps = network.add_group(std::string(kProximityGroup), sim::kProximitySensors, cfg.sensory_params,
	                           NeuronKind::sensory, cfg.sensory_noise);
	net.tof = network.add_group(std::string(kTofGroup), 2, cfg.sensory_params, NeuronKind::sensory,
	                            cfg.sensory_noise);
	net.vel_left = network.add_group(std::string(kLeftMotorGroup), 2, cfg.motor_params, NeuronKind::motor,
	                                 cfg.motor_noise);
	net.vel_right = network.add_group(std::string(kRightMotorGroup), 2, cfg.motor_params,
	                                  NeuronKind::motor, cfg.motor_noise);

	const double w = cfg.excitatory_weight;
	for (std::uint32_t i = 0; i < sim::kProximitySensors; ++i) {
		const Side side = side_of(i, cfg.layout);
		network.connect({net.ps, i}, {net.motor_group(side), kForward}, w, cfg.delay_ms);
		network.connect({net.ps, i}, {net.motor_group(opposite(side)), kBackward}, w, cfg.delay_ms);
	}
	for (const auto motor : {net.vel_left, net.vel_right}) {
		network.connect({net.tof, kTofClear}, {motor, kForward}, w, cfg.delay_ms);
		network.connect({net.tof, kTofObstacle}, {motor, kBackward}, w, cfg.delay_ms);
	}

	net.network = std::move(network);
	return net;
}

} // namespace spikeworks::braitenberg
