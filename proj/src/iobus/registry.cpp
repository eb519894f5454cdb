#include "spikeworks/iobus/registry.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace spikeworks::iobus {

std::string TcpAddress::str() const { return host + ":" + std::to_string(port); }

TcpAddress TcpAddress::parse(std::string_view text)
{
	const auto colon = text.rfind(':');
	if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size())
		throw std::invalid_argument("address must look like host:port");
	unsigned value = 0;
	const auto digits = text.substr(colon + 1);
	const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
	if (ec != std::errc{} || ptr != digits.data() + digits.size() || value > 65535)
		throw std::invalid_argument("bad port number in address '" + std::string(text) + "'");
	return {std::string(text.substr(0, colon)), static_cast<std::uint16_t>(value)};
}

const Endpoint& Registry::add(const PortName& name, Direction direction, Location location)
{
	if (ports_.contains(name))
		throw std::invalid_argument("port '" + name.str() + "' is already registered");
	return ports_.emplace(name, Endpoint{name, direction, std::move(location)}).first->second;
}

bool Registry::remove(const PortName& name)
{
	if (ports_.erase(name) == 0)
		return false;
	std::erase_if(connections_, [&](const Connection& c) { return c.source == name || c.sink == name; });
	return true;
}

void Registry::relocate(const PortName& name, Location location)
{
	const auto it = ports_.find(name);
	if (it == ports_.end())
		throw std::invalid_argument("unknown port '" + name.str() + "'");
	it->second.location = std::move(location);
}

std::optional<Endpoint> Registry::resolve(const PortName& name) const
{
	const auto it = ports_.find(name);
	if (it == ports_.end())
		return std::nullopt;
	return it->second;
}

Connection Registry::connect(const PortName& source, const PortName& sink)
{
	const auto src = ports_.find(source);
	const auto dst = ports_.find(sink);
	if (src == ports_.end())
		throw std::invalid_argument("unknown source port '" + source.str() + "'");
	if (dst == ports_.end())
		throw std::invalid_argument("unknown sink port '" + sink.str() + "'");
	if (src->second.direction != Direction::output)
		throw std::invalid_argument("source '" + source.str() + "' is not an output port");
	if (dst->second.direction != Direction::input)
		throw std::invalid_argument("sink '" + sink.str() + "' is not an input port");

	Connection c{ConnectionId{next_connection_++}, source, sink};
	connections_.push_back(c);
	return c;
}

bool Registry::disconnect(ConnectionId id)
{
	return std::erase_if(connections_, [&](const Connection& c) { return c.id == id; }) > 0;
}

std::vector<Connection> Registry::connections_from(const PortName& source) const
{
	std::vector<Connection> out;
	for (const auto& c : connections_)
		if (c.source == source)
			out.push_back(c);
	return out;
}

std::vector<Endpoint> Registry::endpoints() const
{
	std::vector<Endpoint> out;
	out.reserve(ports_.size());
	for (const auto& [_, e] : ports_)
		out.push_back(e);
	return out;
}

} // namespace spikeworks::iobus
