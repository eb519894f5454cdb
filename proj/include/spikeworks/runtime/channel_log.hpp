#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace spikeworks::runtime {

// Line-oriented record file "<dir>/<channel>.log"; each line reads
// "<t_ms> key=value ...". Lines are buffered until flush().
class ChannelLog {
public:
	ChannelLog(const std::filesystem::path& dir, std::string channel);

	const std::string& channel() const { return channel_; }
	const std::filesystem::path& path() const { return path_; }

	void record(std::int64_t t_ms, const std::vector<std::pair<std::string, std::string>>& fields);
	void flush();

private:
	std::string channel_;
	std::filesystem::path path_;
	std::ofstream out_;
	std::string pending_;
};

// One ChannelLog per channel name, created on first use.
class ChannelLogSet {
public:
	explicit ChannelLogSet(std::filesystem::path dir);

	ChannelLog& channel(const std::string& name);
	void flush_all();
	const std::filesystem::path& dir() const { return dir_; }

private:
	std::filesystem::path dir_;
	std::map<std::string, ChannelLog> logs_;
};

// SPIKEWORKS_LOG_DIR when set and non-empty, otherwise `fallback`.
std::filesystem::path resolve_log_dir(const std::filesystem::path& fallback);

} // namespace spikeworks::runtime
