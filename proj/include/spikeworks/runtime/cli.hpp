#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace spikeworks::runtime {

struct RunOptions {
	std::optional<std::filesystem::path> config;
	std::optional<std::string> world; // preset name or JSON file
	double duration_s = 60.0;
	std::optional<std::uint64_t> seed;
	std::filesystem::path out = "out";
	bool headless = false;
	std::optional<std::string> serve; // "host:port"
	std::optional<double> speed;
};

// Runs one session and writes its outputs. Returns the process exit code:
// 0 iff the run reached its duration without collisions.
int cli_run(const RunOptions& options, std::ostream& log);

// Entry point: `run ...` and `nameserver ...` subcommands.
int cli_main(int argc, char** argv);

} // namespace spikeworks::runtime
