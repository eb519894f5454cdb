#pragma once

#include <cstdint>
#include <string_view>

#include "spikeworks/sim/sensors.hpp"
#include "spikeworks/snn/network.hpp"

namespace spikeworks::braitenberg {

inline constexpr std::string_view kProximityGroup = "ctx.ps";
inline constexpr std::string_view kTofGroup = "ctx.tof";
inline constexpr std::string_view kLeftMotorGroup = "ctx.vel_left";
inline constexpr std::string_view kRightMotorGroup = "ctx.vel_right";

// Neuron roles inside the two-neuron groups.
inline constexpr std::uint32_t kForward = 0;
inline constexpr std::uint32_t kBackward = 1;
inline constexpr std::uint32_t kTofClear = 0;
inline constexpr std::uint32_t kTofObstacle = 1;

enum class Side { left, right };

std::string_view to_string(Side side);
Side opposite(Side side);

// Negative mounting angle = right side. Angles at exactly 0 or pi have no
// side and are rejected.
Side side_of(std::size_t sensor_index, const sim::SensorLayout& layout = {});

struct BraitenbergConfig {
	snn::IzhikevichParams sensory_params = snn::IzhikevichParams::regular_spiking();
	snn::IzhikevichParams motor_params = snn::IzhikevichParams::regular_spiking();
	double excitatory_weight = 80.0;
	std::uint32_t delay_ms = 1;
	double sensory_noise = 2.0;
	double motor_noise = 6.0;
	sim::SensorLayout layout;
};

struct EpuckNetwork {
	snn::Network network;
	snn::GroupId ps;
	snn::GroupId tof;
	snn::GroupId vel_left;
	snn::GroupId vel_right;

	snn::GroupId motor_group(Side side) const { return side == Side::left ? vel_left : vel_right; }
};

// The 14-neuron obstacle-avoidance controller:
//   ps[i]       -> forward motor on the sensor's side, backward motor opposite
//   tof[clear]  -> both forward motors
//   tof[obstacle] -> both backward motors
// All synapses excitatory with the configured weight and delay.
EpuckNetwork build_epuck_network(const BraitenbergConfig& cfg = {});

// Adds the same groups and wiring to an existing network.
EpuckNetwork build_epuck_network(snn::Network network, const BraitenbergConfig& cfg);

} // namespace spikeworks::braitenberg
