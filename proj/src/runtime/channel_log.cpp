#include "spikeworks/runtime/channel_log.hpp"

#include <cstdlib>
#include <stdexcept>

namespace spikeworks::runtime {

ChannelLog::ChannelLog(const std::filesystem::path& dir, std::string channel)
	: channel_(std::move(channel)), path_(dir / (channel_ + ".log"))
{
	out_.open(path_, std::ios::trunc);
	if (!out_)
		throw std::runtime_error("cannot open log file " + path_.string());
}

void ChannelLog::record(std::int64_t t_ms, const std::vector<std::pair<std::string, std::string>>& fields)
{
	pending_ += std::to_string(t_ms);
	for (const auto& [key, value] : fields) {
		pending_ += ' ';
		pending_ += key;
		pending_ += '=';
		pending_ += value;
	}
	pending_ += '\n';
}

void ChannelLog::flush()
{
	if (pending_.empty())
		return;
	out_ << pending_;
	out_.flush();
	pending_.clear();
}

ChannelLogSet::ChannelLogSet(std::filesystem::path dir) : dir_(std::move(dir))
{
	std::filesystem::create_directories(dir_);
}

ChannelLog& ChannelLogSet::channel(const std::string& name)
{
	auto it = logs_.find(name);
	if (it == logs_.end())
		it = logs_.emplace(std::piecewise_construct, std::forward_as_tuple(name),
		                   std::forward_as_tuple(dir_, name))
		         .first;
	return it->second;
}

void ChannelLogSet::flush_all()
{
	for (auto& [_, log] : logs_)
		log.flush();
}

std::filesystem::path resolve_log_dir(const std::filesystem::path& fallback)
{
	if (const char* env = std::getenv("SPIKEWORKS_LOG_DIR"); env != nullptr && *env != '\0')
		return env;
	return fallback;
}

} // namespace spikeworks::runtime
