#include "spikeworks/runtime/config.hpp"

#include "spikeworks/iobus/port_name.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <set>
#include <type_traits>

namespace spikeworks::runtime {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

constexpr double kDeg = std::numbers::pi / 180.0;

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where)
{
	if (!obj.is_object())
		throw ConfigError(std::string(where) + " must be an object");
	const std::set<std::string_view> keys(allowed);
	for (const auto& [key, _] : obj.items())
		if (!keys.contains(key))
			throw ConfigError("unknown key '" + key + "' in " + std::string(where));
}

template <typename T>
void read(const json& obj, const char* key, T& out)
{
	if (!obj.contains(key))
		return;
	const auto& v = obj.at(key);
	if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
		// get<unsigned> would silently wrap negative values.
		if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0) ||
		    v.get<std::uint64_t>() > std::numeric_limits<T>::max())
			throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
	}
	out = v.get<T>();
}

snn::IzhikevichParams read_params(const json& j, snn::IzhikevichParams p)
{
	check_keys(j, {"a", "b", "c", "d"}, "neuron parameters");
	read(j, "a", p.a);
	read(j, "b", p.b);
	read(j, "c", p.c);
	read(j, "d", p.d);
	return p;
}

ojson params_json(const snn::IzhikevichParams& p)
{
	return ojson{{"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}};
}

void read_network(const json& j, NetworkConfig& n)
{
	check_keys(j, {"epuck", "excitatory_weight", "delay_ms", "sensory_noise", "motor_noise", "sensory_params",
	               "motor_params", "groups", "connections"},
	           "network");
	auto& b = n.braitenberg;
	read(j, "epuck", n.epuck);
	read(j, "excitatory_weight", b.excitatory_weight);
	read(j, "delay_ms", b.delay_ms);
	read(j, "sensory_noise", b.sensory_noise);
	read(j, "motor_noise", b.motor_noise);
	if (j.contains("sensory_params"))
		b.sensory_params = read_params(j.at("sensory_params"), b.sensory_params);
	if (j.contains("motor_params"))
		b.motor_params = read_params(j.at("motor_params"), b.motor_params);

	if (j.contains("groups"))
		for (const auto& g : j.at("groups"))
			n.groups.push_back(parse_group_config(g));
	if (j.contains("connections"))
		for (const auto& c : j.at("connections"))
			n.connections.push_back(parse_connection_config(c));
}

void read_codec(const json& j, CodecConfig& c)
{
	check_keys(j, {"proximity", "tof", "decoder", "window_ms"}, "codec");
	if (j.contains("proximity")) {
		const auto& p = j.at("proximity");
		check_keys(p, {"gain", "bias", "saturation"}, "codec.proximity");
		read(p, "gain", c.proximity.gain);
		read(p, "bias", c.proximity.bias);
		read(p, "saturation", c.proximity.saturation);
	}
	if (j.contains("tof")) {
		const auto& t = j.at("tof");
		check_keys(t, {"gain_clear", "gain_obstacle", "d_stop", "d_safe", "range_max"}, "codec.tof");
		read(t, "gain_clear", c.tof.gain_clear);
		read(t, "gain_obstacle", c.tof.gain_obstacle);
		read(t, "d_stop", c.tof.d_stop);
		read(t, "d_safe", c.tof.d_safe);
		read(t, "range_max", c.tof.range_max);
	}
	if (j.contains("decoder")) {
		const auto& d = j.at("decoder");
		check_keys(d, {"k", "v_max"}, "codec.decoder");
		read(d, "k", c.decoder.k);
		read(d, "v_max", c.decoder.v_max);
	}
	read(j, "window_ms", c.window_ms);
}

void read_sensors(const json& j, sim::SensorLayout& layout)
{
	check_keys(j, {"angles_deg", "ir_range", "tof_range"}, "sensors");
	if (j.contains("angles_deg")) {
		const auto& a = j.at("angles_deg");
		if (!a.is_array() || a.size() != sim::kProximitySensors)
			throw ConfigError("sensors.angles_deg needs exactly 8 entries");
		for (std::size_t i = 0; i < sim::kProximitySensors; ++i)
			layout.angles_rad[i] = a[i].get<double>() * kDeg;
	}
	read(j, "ir_range", layout.ir_range);
	read(j, "tof_range", layout.tof_range);
}

void read_robot(const json& j, sim::RobotGeometry& g)
{
	check_keys(j, {"wheel_radius", "axle_length", "steps_per_rev", "body_radius"}, "robot");
	read(j, "wheel_radius", g.wheel_radius);
	read(j, "axle_length", g.axle_length);
	read(j, "steps_per_rev", g.steps_per_rev);
	read(j, "body_radius", g.body_radius);
}

void read_ports(const json& j, PortsConfig& p)
{
	check_keys(j, {"sensors_out", "sensors_in", "command_out", "command_in", "transport", "queue_capacity"},
	           "ports");
	read(j, "sensors_out", p.sensors_out);
	read(j, "sensors_in", p.sensors_in);
	read(j, "command_out", p.command_out);
	read(j, "command_in", p.command_in);
	read(j, "queue_capacity", p.queue_capacity);
	if (j.contains("transport")) {
		const auto t = j.at("transport").get<std::string>();
		if (t == "inproc")
			p.transport = Transport::inproc;
		else if (t == "tcp")
			p.transport = Transport::tcp;
		else
			throw ConfigError("ports.transport must be 'inproc' or 'tcp'");
	}
}

} // namespace

GroupConfig parse_group_config(const nlohmann::json& g)
{
	try {
		check_keys(g, {"name", "size", "kind", "params", "noise"}, "network group");
		GroupConfig gc;
		gc.name = g.at("name").get<std::string>();
		read(g, "size", gc.size);
		if (g.contains("kind"))
			gc.kind = snn::parse_neuron_kind(g.at("kind").get<std::string>());
		if (g.contains("params"))
			gc.params = read_params(g.at("params"), gc.params);
		read(g, "noise", gc.noise_sigma);
		return gc;
	} catch (const nlohmann::json::exception& e) {
		throw ConfigError(std::string("network group: ") + e.what());
	}
}

ConnectionConfig parse_connection_config(const nlohmann::json& c)
{
	try {
		check_keys(c, {"pre", "post", "weight", "delay_ms"}, "network connection");
		ConnectionConfig cc;
		cc.pre = c.at("pre").get<std::string>();
		cc.post = c.at("post").get<std::string>();
		cc.weight = c.at("weight").get<double>();
		read(c, "delay_ms", cc.delay_ms);
		return cc;
	} catch (const nlohmann::json::exception& e) {
		throw ConfigError(std::string("network connection: ") + e.what());
	}
}

void SessionConfig::validate() const
{
	if (version != kConfigVersion)
		throw ConfigError("unsupported config version " + std::to_string(version));
	try {
		codec.proximity.validate();
		codec.tof.validate();
		codec.decoder.validate();
		geometry.validate();
		layout().validate();
		world.validate();
		network.braitenberg.sensory_params.validate();
		network.braitenberg.motor_params.validate();
		for (const auto* name : {&ports.sensors_out, &ports.sensors_in, &ports.command_out, &ports.command_in})
			iobus::PortName{*name};
	} catch (const std::invalid_argument& e) {
		throw ConfigError(e.what());
	}
	if (codec.window_ms == 0)
		throw ConfigError("codec.window_ms must be positive");
	if (sensor_period_ms == 0 || trajectory_period_ms == 0 || rate_bin_ms == 0)
		throw ConfigError("periods must be positive");
	if (!(rt_factor > 0.0) || !std::isfinite(rt_factor))
		throw ConfigError("rt_factor must be positive");
	if (ports.queue_capacity == 0)
		throw ConfigError("ports.queue_capacity must be positive");
	for (const auto& inj : injectors)
		if (!(inj.rate_hz >= 0.0 && inj.rate_hz <= 1000.0))
			throw ConfigError("injector rate must lie in [0, 1000] Hz");
}

SessionConfig default_config() { return SessionConfig{}; }

SessionConfig parse_config(const json& j)
try {
	check_keys(j, {"version", "seed", "network", "codec", "world", "start", "sensors", "robot", "ports",
	               "monitors", "injectors", "sensor_period_ms", "trajectory_period_ms", "rate_bin_ms",
	               "rt_factor"},
	           "config");
	if (!j.contains("version"))
		throw ConfigError("config needs an integer 'version' field");

	SessionConfig cfg;
	cfg.version = j.at("version").get<int>();
	if (cfg.version != kConfigVersion)
		throw ConfigError("unsupported config version " + std::to_string(cfg.version));
	read(j, "seed", cfg.seed);
	if (j.contains("network"))
		read_network(j.at("network"), cfg.network);
	if (j.contains("codec"))
		read_codec(j.at("codec"), cfg.codec);
	if (j.contains("world"))
		cfg.world = sim::load_world(j.at("world"));
	if (j.contains("start")) {
		const auto& s = j.at("start");
		if (!s.is_array() || s.size() != 3)
			throw ConfigError("start is [x, y, theta]");
		cfg.start = sim::Pose{s[0].get<double>(), s[1].get<double>(), sim::normalize_angle(s[2].get<double>())};
	}
	if (j.contains("sensors"))
		read_sensors(j.at("sensors"), cfg.network.braitenberg.layout);
	if (j.contains("robot"))
		read_robot(j.at("robot"), cfg.geometry);
	if (j.contains("ports"))
		read_ports(j.at("ports"), cfg.ports);
	if (j.contains("monitors")) {
		for (const auto& m : j.at("monitors")) {
			check_keys(m, {"name", "groups"}, "monitor");
			MonitorConfig mc;
			mc.name = m.at("name").get<std::string>();
			read(m, "groups", mc.groups);
			cfg.monitors.push_back(std::move(mc));
		}
	}
	if (j.contains("injectors")) {
		for (const auto& i : j.at("injectors")) {
			check_keys(i, {"target", "rate_hz", "amplitude"}, "injector");
			cfg.injectors.push_back({i.at("target").get<std::string>(), i.at("rate_hz").get<double>(),
			                         i.at("amplitude").get<double>()});
		}
	}
	read(j, "sensor_period_ms", cfg.sensor_period_ms);
	read(j, "trajectory_period_ms", cfg.trajectory_period_ms);
	read(j, "rate_bin_ms", cfg.rate_bin_ms);
	read(j, "rt_factor", cfg.rt_factor);
	cfg.validate();
	return cfg;
} catch (const nlohmann::json::exception& e) {
	throw ConfigError(std::string("config: ") + e.what());
} catch (const std::invalid_argument& e) {
	throw ConfigError(std::string("config: ") + e.what());
}

SessionConfig load_config(const std::filesystem::path& path)
{
	std::ifstream in(path);
	if (!in)
		throw ConfigError("cannot open config file " + path.string());
	json j;
	try {
		in >> j;
	} catch (const json::parse_error& e) {
		throw ConfigError("config file " + path.string() + ": " + e.what());
	}
	return parse_config(j);
}

ojson to_json(const SessionConfig& cfg)
{
	const auto& b = cfg.network.braitenberg;
	ojson groups = ojson::array();
	for (const auto& g : cfg.network.groups)
		groups.push_back({{"name", g.name},
		                  {"size", g.size},
		                  {"kind", std::string(snn::to_string(g.kind))},
		                  {"params", params_json(g.params)},
		                  {"noise", g.noise_sigma}});
	ojson connections = ojson::array();
	for (const auto& c : cfg.network.connections)
		connections.push_back({{"pre", c.pre}, {"post", c.post}, {"weight", c.weight}, {"delay_ms", c.delay_ms}});

	ojson angles = ojson::array();
	for (const auto a : cfg.layout().angles_rad)
		angles.push_back(a / kDeg);

	ojson monitors = ojson::array();
	for (const auto& m : cfg.monitors)
		monitors.push_back({{"name", m.name}, {"groups", m.groups}});
	ojson injectors = ojson::array();
	for (const auto& i : cfg.injectors)
		injectors.push_back({{"target", i.target}, {"rate_hz", i.rate_hz}, {"amplitude", i.amplitude}});

	ojson j;
	j["version"] = cfg.version;
	j["seed"] = cfg.seed;
	j["network"] = {{"epuck", cfg.network.epuck},
	                {"excitatory_weight", b.excitatory_weight},
	                {"delay_ms", b.delay_ms},
	                {"sensory_noise", b.sensory_noise},
	                {"motor_noise", b.motor_noise},
	                {"sensory_params", params_json(b.sensory_params)},
	                {"motor_params", params_json(b.motor_params)},
	                {"groups", groups},
	                {"connections", connections}};
	j["codec"] = {{"proximity",
	               {{"gain", cfg.codec.proximity.gain},
	                {"bias", cfg.codec.proximity.bias},
	                {"saturation", cfg.codec.proximity.saturation}}},
	              {"tof",
	               {{"gain_clear", cfg.codec.tof.gain_clear},
	                {"gain_obstacle", cfg.codec.tof.gain_obstacle},
	                {"d_stop", cfg.codec.tof.d_stop},
	                {"d_safe", cfg.codec.tof.d_safe},
	                {"range_max", cfg.codec.tof.range_max}}},
	              {"decoder", {{"k", cfg.codec.decoder.k}, {"v_max", cfg.codec.decoder.v_max}}},
	              {"window_ms", cfg.codec.window_ms}};
	j["world"] = ojson::parse(sim::to_json(cfg.world).dump());
	if (cfg.start)
		j["start"] = {cfg.start->x, cfg.start->y, cfg.start->theta};
	j["sensors"] = {{"angles_deg", angles}, {"ir_range", cfg.layout().ir_range}, {"tof_range", cfg.layout().tof_range}};
	j["robot"] = {{"wheel_radius", cfg.geometry.wheel_radius},
	              {"axle_length", cfg.geometry.axle_length},
	              {"steps_per_rev", cfg.geometry.steps_per_rev},
	              {"body_radius", cfg.geometry.body_radius}};
	j["ports"] = {{"sensors_out", cfg.ports.sensors_out},
	              {"sensors_in", cfg.ports.sensors_in},
	              {"command_out", cfg.ports.command_out},
	              {"command_in", cfg.ports.command_in},
	              {"transport", cfg.ports.transport == Transport::tcp ? "tcp" : "inproc"},
	              {"queue_capacity", cfg.ports.queue_capacity}};
	j["monitors"] = monitors;
	j["injectors"] = injectors;
	j["sensor_period_ms"] = cfg.sensor_period_ms;
	j["trajectory_period_ms"] = cfg.trajectory_period_ms;
	j["rate_bin_ms"] = cfg.rate_bin_ms;
	j["rt_factor"] = cfg.rt_factor;
	return j;
}

} // namespace spikeworks::runtime
