#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spikeworks/braitenberg/epuck_network.hpp"
#include "spikeworks/codec/decoder.hpp"
#include "spikeworks/codec/encoders.hpp"
#include "spikeworks/sim/world.hpp"

namespace spikeworks::runtime {

constexpr int kConfigVersion = 1;

class ConfigError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

struct CodecConfig {
	codec::EncoderConfig proximity{.gain = 60.0, .bias = 0.0, .saturation = 60.0};
	codec::TofEncoderConfig tof;
	codec::DecoderConfig decoder;
	std::uint32_t window_ms = 100;
};

enum class Transport { inproc, tcp };

struct PortsConfig {
	std::string sensors_out = "/epuck/sensors";
	std::string sensors_in = "/snn/sensors";
	std::string command_out = "/snn/vel";
	std::string command_in = "/epuck/actuators/vel";
	Transport transport = Transport::inproc;
	std::size_t queue_capacity = 1024;
};

struct GroupConfig {
	std::string name;
	std::uint32_t size = 1;
	snn::NeuronKind kind = snn::NeuronKind::inter;
	snn::IzhikevichParams params;
	double noise_sigma = 0.0;
};

struct ConnectionConfig {
	std::string pre;  // "group[index]"
	std::string post;
	double weight = 0.0;
	std::uint32_t delay_ms = 1;
};

struct NetworkConfig {
	// Build the E-Puck obstacle-avoidance controller before the extra groups.
	bool epuck = true;
	braitenberg::BraitenbergConfig braitenberg;
	std::vector<GroupConfig> groups;
	std::vector<ConnectionConfig> connections;
};

struct MonitorConfig {
	std::string name;
	std::vector<std::string> groups; // empty = every group
};

// Poisson current pulses into one neuron.
struct InjectorConfig {
	std::string target; // "group[index]"
	double rate_hz = 0.0;
	double amplitude = 0.0;
};

struct SessionConfig {
	int version = kConfigVersion;
	std::uint64_t seed = 1;
	NetworkConfig network;
	CodecConfig codec;
	sim::World world = sim::preset_world("box");
	std::optional<sim::Pose> start; // overrides the world's start pose
	sim::RobotGeometry geometry;
	PortsConfig ports;
	std::vector<MonitorConfig> monitors;
	std::vector<InjectorConfig> injectors;
	std::uint32_t sensor_period_ms = 128;
	std::uint32_t trajectory_period_ms = 10;
	std::uint32_t rate_bin_ms = 100;
	double rt_factor = 1.0;

	const sim::SensorLayout& layout() const { return network.braitenberg.layout; }
	sim::Pose start_pose() const { return start.value_or(world.start); }
	void validate() const;
};

SessionConfig default_config();

GroupConfig parse_group_config(const nlohmann::json& j);
ConnectionConfig parse_connection_config(const nlohmann::json& j);

// Missing fields keep their defaults; "version" is required.
SessionConfig parse_config(const nlohmann::json& j);
SessionConfig load_config(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const SessionConfig& cfg);

} // namespace spikeworks::runtime
