#include "spikeworks/runtime/session.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>

#include "spikeworks/runtime/metrics.hpp"
#include "spikeworks/sim/kinematics.hpp"

namespace spikeworks::runtime {

namespace {

using ojson = nlohmann::ordered_json;
using sim::format_number;

constexpr double kTickSeconds = 0.001;
constexpr auto kTcpDeliveryTimeout = std::chrono::seconds(5);
// Payload of a sensor message: 8 proximity values, ToF distance, wheel steps.
constexpr std::size_t kSensorPayload = sim::kProximitySensors + 3;

} // namespace

std::string_view to_string(Mode mode)
{
	switch (mode) {
	case Mode::idle: return "idle";
	case Mode::running: return "running";
	case Mode::paused: return "paused";
	}
	return "idle";
}

ojson to_json(const SessionState& s)
{
	ojson j;
	j["mode"] = std::string(to_string(s.mode));
	j["sim_time_ms"] = s.sim_time_ms;
	j["rt_factor"] = s.rt_factor;
	j["seed"] = s.seed;
	j["pose"] = {{"x", s.pose.x}, {"y", s.pose.y}, {"theta", s.pose.theta}};
	j["collision_count"] = s.collision_count;
	return j;
}

Command Command::parse(const nlohmann::json& body)
{
	if (!body.is_object() || !body.contains("cmd") || !body.at("cmd").is_string())
		throw std::invalid_argument("control body needs a string 'cmd'");
	const auto name = body.at("cmd").get<std::string>();
	Command c;
	if (name == "start") {
		c.kind = Kind::start;
	} else if (name == "pause") {
		c.kind = Kind::pause;
	} else if (name == "continue") {
		c.kind = Kind::resume;
	} else if (name == "stop") {
		c.kind = Kind::stop;
	} else if (name == "step") {
		c.kind = Kind::step;
		if (body.contains("n_ms")) {
			if (!body.at("n_ms").is_number_integer())
				throw std::invalid_argument("n_ms must be an integer");
			c.n_ms = body.at("n_ms").get<std::int64_t>();
		}
		if (c.n_ms < 1)
			throw std::invalid_argument("n_ms must be at least 1");
	} else if (name == "speed") {
		c.kind = Kind::speed;
		if (!body.contains("factor") || !body.at("factor").is_number())
			throw std::invalid_argument("speed needs a numeric 'factor'");
		c.factor = body.at("factor").get<double>();
		if (!(c.factor > 0.0) || !std::isfinite(c.factor))
			throw std::invalid_argument("speed factor must be positive");
	} else {
		throw std::invalid_argument("unknown command '" + name + "'");
	}
	return c;
}

Session::Session(SessionConfig config, std::optional<std::filesystem::path> log_dir)
	: config_(std::move(config)),
	  rt_factor_(config_.rt_factor),
	  rng_(config_.seed),
	  left_fwd_(1, config_.codec.window_ms),
	  left_bwd_(1, config_.codec.window_ms),
	  right_fwd_(1, config_.codec.window_ms),
	  right_bwd_(1, config_.codec.window_ms),
	  pose_(config_.start_pose()),
	  odometry_(config_.geometry)
{
	config_.validate();
	if (log_dir)
		logs_ = std::make_unique<ChannelLogSet>(*log_dir);

	build_network();
	setup_ports();
	for (const auto& m : config_.monitors)
		attach_monitor(m.name, m.groups);

	trajectory_.push_back({0, pose_});
	event_poses_.push_back(pose_);
}

Session::~Session()
{
	if (logs_)
		logs_->flush_all();
}

void Session::build_network()
{
	if (config_.network.epuck) {
		net_ = braitenberg::build_epuck_network(config_.network.braitenberg);
		has_controller_ = true;
	}
	for (const auto& g : config_.network.groups)
		net_.network.add_group(g.name, g.size, g.params, g.kind, g.noise_sigma);
	for (const auto& c : config_.network.connections)
		net_.network.connect(c.pre, c.post, c.weight, c.delay_ms);
	for (const auto& i : config_.injectors)
		injectors_.push_back({net_.network.resolve(i.target), codec::PoissonSource(i.rate_hz), i.amplitude});
}

void Session::setup_ports()
{
	using iobus::Direction;
	const auto& p = config_.ports;
	sensors_out_ = bus_.register_port(p.sensors_out, Direction::output);
	sensors_in_ = bus_.register_port(p.sensors_in, Direction::input, p.queue_capacity);
	command_out_ = bus_.register_port(p.command_out, Direction::output);
	command_in_ = bus_.register_port(p.command_in, Direction::input, p.queue_capacity);
	tcp_ = p.transport == Transport::tcp;
	if (tcp_) {
		bus_.expose_tcp(sensors_in_.name());
		bus_.expose_tcp(command_in_.name());
	}
	bus_.connect_ports(sensors_out_.name(), sensors_in_.name());
	bus_.connect_ports(command_out_.name(), command_in_.name());
}

SessionState Session::state() const
{
	return {mode_, sim_time_, rt_factor_, config_.seed, pose_, collision_count_};
}

void Session::require_mode(std::initializer_list<Mode> allowed, std::string_view what) const
{
	if (std::find(allowed.begin(), allowed.end(), mode_) == allowed.end())
		throw IllegalTransition(std::string(what) + " is not allowed while " + std::string(to_string(mode_)));
}

SessionState Session::handle_command(const Command& command)
{
	using Kind = Command::Kind;
	switch (command.kind) {
	case Kind::start:
		require_mode({Mode::idle}, "start");
		mode_ = Mode::running;
		log_state_change("start");
		break;
	case Kind::pause:
		require_mode({Mode::running}, "pause");
		mode_ = Mode::paused;
		log_state_change("pause");
		break;
	case Kind::resume:
		require_mode({Mode::paused}, "continue");
		mode_ = Mode::running;
		log_state_change("continue");
		break;
	case Kind::stop:
		require_mode({Mode::running, Mode::paused}, "stop");
		mode_ = Mode::idle;
		log_state_change("stop");
		flush_logs();
		break;
	case Kind::step:
		require_mode({Mode::idle, Mode::paused}, "step");
		if (command.n_ms < 1)
			throw std::invalid_argument("step needs n_ms >= 1");
		for (std::int64_t i = 0; i < command.n_ms; ++i)
			do_tick();
		break;
	case Kind::speed:
		if (!(command.factor > 0.0) || !std::isfinite(command.factor))
			throw std::invalid_argument("speed factor must be positive");
		rt_factor_ = command.factor;
		break;
	}
	return state();
}

void Session::tick()
{
	require_mode({Mode::running}, "tick");
	do_tick();
}

snn::GroupId Session::add_group(const GroupConfig& group)
{
	require_mode({Mode::idle}, "editing the network");
	return net_.network.add_group(group.name, group.size, group.params, group.kind, group.noise_sigma);
}

snn::SynapseId Session::add_connection(const ConnectionConfig& connection)
{
	require_mode({Mode::idle}, "editing the network");
	return net_.network.connect(connection.pre, connection.post, connection.weight, connection.delay_ms);
}

std::size_t Session::attach_monitor(std::string name, const std::vector<std::string>& groups)
{
	std::set<snn::GroupId> ids;
	for (const auto& g : groups) {
		const auto id = net_.network.find_group(g);
		if (!id)
			throw std::invalid_argument("monitor '" + name + "' watches unknown group '" + g + "'");
		ids.insert(*id);
	}
	monitors_.push_back(std::make_unique<SpikeMonitor>(std::move(name), std::move(ids)));
	return monitors_.size() - 1;
}

void Session::detach_monitor(std::size_t id)
{
	if (id >= monitors_.size() || !monitors_[id])
		throw std::out_of_range("no such monitor");
	monitors_[id].reset();
}

SpikeMonitor& Session::monitor(std::size_t id)
{
	if (id >= monitors_.size() || !monitors_[id])
		throw std::out_of_range("no such monitor");
	return *monitors_[id];
}

void Session::set_tick_observer(std::function<void(const TickRecord&)> observer)
{
	observer_ = std::move(observer);
}

std::vector<iobus::PortMessage> Session::receive(iobus::PortHandle& port, std::size_t expected)
{
	if (tcp_ && expected > 0 && !port.wait_for(expected, kTcpDeliveryTimeout))
		throw std::runtime_error("timed out waiting for " + port.name().str());
	return port.poll();
}

void Session::do_tick()
{
	const std::int64_t t = sim_time_;
	TickRecord record;
	record.t_ms = t;

	const bool sensor_event = t % config_.sensor_period_ms == 0;
	if (sensor_event)
		sample_sensors(t, record);

	encode_inputs(sensor_event ? 1 : 0);
	auto currents = sensor_currents_;
	for (auto& inj : injectors_)
		if (inj.source.next(rng_))
			currents[inj.target] += inj.amplitude;

	auto spikes = net_.network.advance(t, currents, rng_);
	spike_log_.insert(spike_log_.end(), spikes.begin(), spikes.end());
	for (auto& m : monitors_)
		if (m)
			m->record(spikes);

	decode_outputs(t, spikes);
	move_robot(t);

	const bool contact = sim::check_collision(config_.world, pose_, config_.geometry);
	if (contact) {
		++collision_ticks_;
		if (!in_contact_) {
			++collision_count_;
			if (logs_)
				logs_->channel("session").record(t, {{"event", "collision"},
				                                     {"x", format_number(pose_.x)},
				                                     {"y", format_number(pose_.y)}});
		}
	}
	in_contact_ = contact;

	sim_time_ = t + 1;
	if (sim_time_ % config_.trajectory_period_ms == 0)
		trajectory_.push_back({sim_time_, pose_});

	if (sensor_event && logs_)
		logs_->flush_all();

	if (observer_) {
		record.spikes = std::move(spikes);
		record.pose = pose_;
		record.command = applied_command_;
		observer_(record);
	}
}

void Session::sample_sensors(std::int64_t t, TickRecord& record)
{
	if (t > 0) {
		step_log_.push_back(odometry_.take_event(t));
		event_poses_.push_back(pose_);
	}
	last_sensors_ = sim::read_sensors(config_.world, pose_, config_.geometry, config_.layout());
	last_sensors_.timestamp_ms = t;
	record.sensors = last_sensors_;

	std::vector<double> payload(last_sensors_.ps.begin(), last_sensors_.ps.end());
	payload.push_back(last_sensors_.tof);
	payload.push_back(static_cast<double>(odometry_.steps_left()));
	payload.push_back(static_cast<double>(odometry_.steps_right()));
	sensors_out_.publish(t, std::move(payload));

	if (!logs_)
		return;
	std::vector<std::pair<std::string, std::string>> ps;
	for (std::size_t i = 0; i < sim::kProximitySensors; ++i)
		ps.emplace_back("ps" + std::to_string(i), format_number(last_sensors_.ps[i]));
	logs_->channel("ps").record(t, ps);
	logs_->channel("tof").record(t, {{"distance", format_number(last_sensors_.tof)}});
	logs_->channel("vel_left").record(t, {{"v", format_number(applied_command_.v_left)},
	                                      {"steps", std::to_string(odometry_.steps_left())}});
	logs_->channel("vel_right").record(t, {{"v", format_number(applied_command_.v_right)},
	                                       {"steps", std::to_string(odometry_.steps_right())}});
	logs_->channel("pose").record(t, {{"x", format_number(pose_.x)},
	                                  {"y", format_number(pose_.y)},
	                                  {"theta", format_number(pose_.theta)}});
}

void Session::encode_inputs(std::size_t expected)
{
	const auto messages = receive(sensors_in_, expected);
	if (messages.empty() || !has_controller_)
		return;
	const auto& m = messages.back();
	if (m.payload.size() != kSensorPayload)
		throw std::runtime_error("unexpected sensor payload size");

	sensor_currents_.clear();
	for (std::uint32_t i = 0; i < sim::kProximitySensors; ++i)
		sensor_currents_[{net_.ps, i}] = codec::encode_proximity(m.payload[i], config_.codec.proximity);
	const auto tof = codec::encode_tof(m.payload[sim::kProximitySensors], config_.codec.tof);
	sensor_currents_[{net_.tof, braitenberg::kTofClear}] = tof.clear;
	sensor_currents_[{net_.tof, braitenberg::kTofObstacle}] = tof.obstacle;
}

void Session::decode_outputs(std::int64_t t, std::span<const snn::SpikeEvent> spikes)
{
	if (!has_controller_) {
		command_out_.publish(t, {0.0, 0.0});
		return;
	}
	std::vector<std::uint32_t> lf, lb, rf, rb;
	for (const auto& s : spikes) {
		const bool fwd = s.index == braitenberg::kForward;
		if (s.group == net_.vel_left)
			(fwd ? lf : lb).push_back(0);
		else if (s.group == net_.vel_right)
			(fwd ? rf : rb).push_back(0);
	}
	left_fwd_.push_tick(t, lf);
	left_bwd_.push_tick(t, lb);
	right_fwd_.push_tick(t, rf);
	right_bwd_.push_tick(t, rb);
	decoded_command_ = {codec::decode_wheel(left_fwd_, left_bwd_, config_.codec.decoder),
	                    codec::decode_wheel(right_fwd_, right_bwd_, config_.codec.decoder)};
	command_out_.publish(t, {decoded_command_.v_left, decoded_command_.v_right});
}

void Session::move_robot(std::int64_t)
{
	const auto messages = receive(command_in_, 1);
	if (!messages.empty()) {
		const auto& p = messages.back().payload;
		applied_command_ = {p.at(0), p.at(1)};
	}
	const auto before = pose_;
	pose_ = sim::step_robot(pose_, applied_command_.v_left, applied_command_.v_right, kTickSeconds,
	                        config_.geometry);
	odometry_.advance(applied_command_.v_left, applied_command_.v_right, kTickSeconds);
	path_length_ += std::hypot(pose_.x - before.x, pose_.y - before.y);
}

void Session::log_state_change(std::string_view what)
{
	if (logs_)
		logs_->channel("session").record(sim_time_, {{"event", std::string(what)}});
}

void Session::flush_logs()
{
	if (logs_)
		logs_->flush_all();
}

ojson Session::summary() const
{
	ojson counts = ojson::object();
	std::map<std::uint32_t, std::uint64_t> per_group;
	for (const auto& s : spike_log_)
		++per_group[s.group.value];
	for (const auto& g : net_.network.groups())
		counts[g.name] = per_group[g.id.value];

	ojson j;
	j["world"] = config_.world.name;
	j["seed"] = config_.seed;
	j["duration_ms"] = sim_time_;
	j["collisions"] = collision_count_;
	j["collision_ticks"] = collision_ticks_;
	j["path_length_m"] = path_length_;
	j["heading_reversals"] = count_heading_reversals(trajectory_);
	j["final_pose"] = {{"x", pose_.x}, {"y", pose_.y}, {"theta", pose_.theta}};
	j["spike_counts"] = counts;
	j["sensor_overflow"] = sensors_in_.overflow_count();
	j["command_overflow"] = command_in_.overflow_count();
	return j;
}

void Session::write_outputs(const std::filesystem::path& dir) const
{
	std::filesystem::create_directories(dir);
	{
		std::ofstream out(dir / "trajectory.csv");
		sim::write_trajectory_csv(out, trajectory_);
	}
	{
		std::ofstream out(dir / "spikes.csv");
		write_spike_csv(out, spike_log_, net_.network);
	}
	{
		std::ofstream out(dir / "rates.csv");
		write_rate_summary(out, spike_log_, net_.network, config_.rate_bin_ms, sim_time_);
	}
	for (const auto& m : monitors_) {
		if (!m)
			continue;
		std::ofstream out(dir / ("monitor_" + m->name() + ".csv"));
		write_spike_csv(out, m->events(), net_.network);
	}
	std::ofstream out(dir / "summary.json");
	out << summary().dump(2) << '\n';
}

} // namespace spikeworks::runtime
