#include "spikeworks/runtime/cli.hpp"

#include <atomic>
#include <cmath>
#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "spikeworks/iobus/name_server.hpp"
#include "spikeworks/runtime/api_server.hpp"
#include "spikeworks/runtime/runner.hpp"
#include "spikeworks/runtime/session.hpp"

namespace spikeworks::runtime {

namespace {

std::atomic<bool> interrupted{false};

extern "C" void on_signal(int) { interrupted = true; }

void install_signal_handlers()
{
	interrupted = false;
	std::signal(SIGINT, on_signal);
	std::signal(SIGTERM, on_signal);
}

void run_direct(Session& session, std::int64_t duration_ms, std::optional<double> speed)
{
	session.handle_command({Command::Kind::start});
	std::optional<Pacer> pacer;
	if (speed) {
		pacer.emplace(*speed);
		pacer->reset(0);
	}
	while (session.state().sim_time_ms < duration_ms && !interrupted) {
		session.tick();
		if (pacer)
			std::this_thread::sleep_until(pacer->due(session.state().sim_time_ms));
	}
	session.handle_command({Command::Kind::stop});
}

void run_served(Session& session, std::int64_t duration_ms, const RunOptions& o, std::ostream& log)
{
	const bool paced = o.speed.has_value() || !o.headless;
	Runner runner(session, paced);
	ApiServer server(runner, parse_bind_address(*o.serve));
	log << "serving on " << parse_bind_address(*o.serve).host << ':' << server.port() << '\n';
	runner.stop_at(duration_ms);
	if (o.headless)
		runner.command({Command::Kind::start});
	while (!interrupted) {
		const auto t = runner.snapshot().sim_time_ms;
		if (t >= duration_ms && runner.snapshot().mode == Mode::idle)
			break;
		runner.wait_until_stopped(std::chrono::milliseconds(100));
		std::this_thread::sleep_for(std::chrono::milliseconds(50));
	}
	server.stop();
	runner.call([](Session& s) {
		if (s.state().mode != Mode::idle)
			s.handle_command({Command::Kind::stop});
		return 0;
	});
}

} // namespace

int cli_run(const RunOptions& o, std::ostream& log)
{
	auto config = o.config ? load_config(*o.config) : default_config();
	if (o.world) {
		config.world = sim::load_world(std::string_view(*o.world));
		config.start.reset();
	}
	if (o.seed)
		config.seed = *o.seed;
	if (o.speed) {
		if (!(*o.speed > 0.0))
			throw std::invalid_argument("--speed must be positive");
		config.rt_factor = *o.speed;
	}
	if (!(o.duration_s > 0.0) || !std::isfinite(o.duration_s))
		throw std::invalid_argument("--duration must be positive");
	const auto duration_ms = static_cast<std::int64_t>(std::llround(o.duration_s * 1000.0));

	const auto log_dir = resolve_log_dir(o.out / "logs");
	Session session(config, log_dir);

	if (o.serve)
		run_served(session, duration_ms, o, log);
	else
		run_direct(session, duration_ms, o.speed);

	session.flush_logs();
	session.write_outputs(o.out);
	const auto summary = session.summary();
	log << summary.dump(2) << '\n';

	const bool completed = session.state().sim_time_ms >= duration_ms;
	if (!completed)
		log << "run interrupted at " << session.state().sim_time_ms << " ms\n";
	return completed && session.collision_count() == 0 ? 0 : 1;
}

int cli_main(int argc, char** argv)
{
	CLI::App app{"Spiking-network E-Puck simulator"};
	app.require_subcommand(1);

	RunOptions run;
	std::string config, world, serve;
	std::uint64_t seed = 0;
	double speed = 0.0;
	auto* run_cmd = app.add_subcommand("run", "Run one session and write its outputs");
	run_cmd->add_option("--config", config, "Session config file (JSON)")->check(CLI::ExistingFile);
	run_cmd->add_option("--world", world, "World preset (box, tmaze) or world file");
	run_cmd->add_option("--duration", run.duration_s, "Simulated seconds")->capture_default_str();
	run_cmd->add_option("--seed", seed, "RNG seed");
	run_cmd->add_option("--out", run.out, "Output directory")->required();
	run_cmd->add_flag("--headless", run.headless, "Start immediately without waiting for API commands");
	run_cmd->add_option("--serve", serve, "Serve the HTTP/WebSocket API on host:port");
	run_cmd->add_option("--speed", speed, "Real-time factor (paced run)")->check(CLI::PositiveNumber);

	std::uint16_t ns_port = iobus::kDefaultNameServerPort;
	std::string ns_host = "127.0.0.1";
	auto* ns_cmd = app.add_subcommand("nameserver", "Run the port name server");
	ns_cmd->add_option("--port", ns_port, "TCP port")->capture_default_str();
	ns_cmd->add_option("--host", ns_host, "Bind address")->capture_default_str();

	CLI11_PARSE(app, argc, argv);

	install_signal_handlers();
	try {
		if (*run_cmd) {
			if (run_cmd->count("--config"))
				run.config = config;
			if (run_cmd->count("--world"))
				run.world = world;
			if (run_cmd->count("--seed"))
				run.seed = seed;
			if (run_cmd->count("--serve"))
				run.serve = serve;
			if (run_cmd->count("--speed"))
				run.speed = speed;
			if (!run.serve)
				run.headless = true;
			return cli_run(run, std::cout);
		}
		iobus::NameServer server(ns_port, ns_host);
		std::cout << "name server on " << server.address().str() << std::endl;
		while (!interrupted)
			std::this_thread::sleep_for(std::chrono::milliseconds(100));
		server.stop();
		return 0;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 2;
	}
}

} // namespace spikeworks::runtime
