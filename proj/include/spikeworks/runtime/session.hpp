#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spikeworks/braitenberg/epuck_network.hpp"
#include "spikeworks/codec/decoder.hpp"
#include "spikeworks/codec/injector.hpp"
#include "spikeworks/iobus/bus.hpp"
#include "spikeworks/runtime/channel_log.hpp"
#include "spikeworks/runtime/config.hpp"
#include "spikeworks/runtime/monitor.hpp"
#include "spikeworks/sim/odometry.hpp"
#include "spikeworks/sim/sensors.hpp"
#include "spikeworks/sim/trajectory_csv.hpp"

namespace spikeworks::runtime {

enum class Mode { idle, running, paused };

std::string_view to_string(Mode mode);

struct SessionState {
	Mode mode = Mode::idle;
	std::int64_t sim_time_ms = 0;
	double rt_factor = 1.0;
	std::uint64_t seed = 0;
	sim::Pose pose;
	std::uint64_t collision_count = 0;
};

nlohmann::ordered_json to_json(const SessionState& state);

struct Command {
	enum class Kind { start, pause, step, resume, stop, speed };

	Kind kind = Kind::start;
	std::int64_t n_ms = 1;
	double factor = 1.0;

	// {"cmd": "start"|"pause"|"step"|"continue"|"stop"|"speed", "n_ms"?, "factor"?}
	static Command parse(const nlohmann::json& body);
};

class IllegalTransition : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// What one tick produced; handed to the tick observer.
struct TickRecord {
	std::int64_t t_ms = 0;
	std::vector<snn::SpikeEvent> spikes;
	std::optional<sim::SensorFrame> sensors;
	sim::Pose pose;
	codec::WheelCommand command;
};

// One simulated E-Puck driven by its spiking controller.
//
// Each 1 ms tick runs the loop sensors -> bus -> encoder -> network ->
// decoder -> bus -> robot. Sensor frames are sampled every
// sensor_period_ms. Everything is deterministic for a given config (seed
// included); wall-clock pacing lives outside this class.
class Session {
public:
	explicit Session(SessionConfig config, std::optional<std::filesystem::path> log_dir = std::nullopt);
	~Session();

	Session(const Session&) = delete;
	Session& operator=(const Session&) = delete;

	const SessionConfig& config() const { return config_; }
	SessionState state() const;

	// Applies a control command. Throws IllegalTransition (state unchanged)
	// when the command is not allowed in the current mode.
	SessionState handle_command(const Command& command);

	// One tick; only allowed while running.
	void tick();

	// Network editing, idle mode only.
	snn::GroupId add_group(const GroupConfig& group);
	snn::SynapseId add_connection(const ConnectionConfig& connection);

	std::size_t attach_monitor(std::string name, const std::vector<std::string>& groups);
	void detach_monitor(std::size_t id);
	const std::vector<std::unique_ptr<SpikeMonitor>>& monitors() const { return monitors_; }
	SpikeMonitor& monitor(std::size_t id);

	void set_tick_observer(std::function<void(const TickRecord&)> observer);

	const snn::Network& network() const { return net_.network; }
	const sim::World& world() const { return config_.world; }
	const sim::Pose& pose() const { return pose_; }
	const sim::WheelOdometry& odometry() const { return odometry_; }
	const std::vector<sim::TrajectorySample>& trajectory() const { return trajectory_; }
	const std::vector<snn::SpikeEvent>& spike_log() const { return spike_log_; }
	const std::vector<sim::StepEvent>& step_log() const { return step_log_; }
	// Ground-truth pose at each sensor event; entry 0 is the start pose.
	const std::vector<sim::Pose>& event_poses() const { return event_poses_; }
	const sim::SensorFrame& last_sensors() const { return last_sensors_; }
	codec::WheelCommand last_command() const { return applied_command_; }
	double path_length() const { return path_length_; }
	std::uint64_t collision_count() const { return collision_count_; }
	std::uint64_t collision_ticks() const { return collision_ticks_; }

	nlohmann::ordered_json summary() const;
	// trajectory.csv, spikes.csv, rates.csv, monitor_<name>.csv, summary.json
	void write_outputs(const std::filesystem::path& dir) const;
	void flush_logs();

private:
	void require_mode(std::initializer_list<Mode> allowed, std::string_view what) const;
	void build_network();
	void setup_ports();
	void do_tick();
	void sample_sensors(std::int64_t t, TickRecord& record);
	void encode_inputs(std::size_t expected);
	void decode_outputs(std::int64_t t, std::span<const snn::SpikeEvent> spikes);
	void move_robot(std::int64_t t);
	std::vector<iobus::PortMessage> receive(iobus::PortHandle& port, std::size_t expected);
	void log_state_change(std::string_view what);

	SessionConfig config_;
	Mode mode_ = Mode::idle;
	std::int64_t sim_time_ = 0;
	double rt_factor_;

	braitenberg::EpuckNetwork net_;
	bool has_controller_ = false;
	snn::Rng rng_;
	snn::CurrentMap sensor_currents_;
	struct Injector {
		snn::NeuronRef target;
		codec::PoissonSource source;
		double amplitude;
	};
	std::vector<Injector> injectors_;

	codec::RateWindow left_fwd_, left_bwd_, right_fwd_, right_bwd_;
	codec::WheelCommand decoded_command_;
	codec::WheelCommand applied_command_;

	iobus::Bus bus_;
	iobus::PortHandle sensors_out_, sensors_in_, command_out_, command_in_;
	bool tcp_ = false;

	sim::Pose pose_;
	sim::WheelOdometry odometry_;
	sim::SensorFrame last_sensors_;
	bool in_contact_ = false;
	std::uint64_t collision_count_ = 0;
	std::uint64_t collision_ticks_ = 0;
	double path_length_ = 0.0;

	std::vector<sim::TrajectorySample> trajectory_;
	std::vector<snn::SpikeEvent> spike_log_;
	std::vector<sim::StepEvent> step_log_;
	std::vector<sim::Pose> event_poses_;

	std::vector<std::unique_ptr<SpikeMonitor>> monitors_;
	std::function<void(const TickRecord&)> observer_;
	std::unique_ptr<ChannelLogSet> logs_;
};

} // namespace spikeworks::runtime
