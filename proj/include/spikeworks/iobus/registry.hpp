#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spikeworks/iobus/port_name.hpp"

namespace spikeworks::iobus {

struct TcpAddress {
	std::string host = "127.0.0.1";
	std::uint16_t port = 0;

	std::string str() const;
	// "host:port"; throws std::invalid_argument when malformed.
	static TcpAddress parse(std::string_view text);
	friend bool operator==(const TcpAddress&, const TcpAddress&) = default;
};

struct InProcess {
	friend bool operator==(const InProcess&, const InProcess&) = default;
};

using Location = std::variant<InProcess, TcpAddress>;

struct Endpoint {
	PortName name;
	Direction direction;
	Location location;
};

struct ConnectionId {
	std::uint64_t value = 0;
	friend auto operator<=>(const ConnectionId&, const ConnectionId&) = default;
};

struct Connection {
	ConnectionId id;
	PortName source;
	PortName sink;
};

// Name table mapping port names to endpoints, plus the connection list.
// Not synchronized; owners guard it.
class Registry {
public:
	// Throws std::invalid_argument if the name is taken.
	const Endpoint& add(const PortName& name, Direction direction, Location location = InProcess{});
	// Drops the entry and every connection touching it. Returns false if absent.
	bool remove(const PortName& name);
	void relocate(const PortName& name, Location location);

	std::optional<Endpoint> resolve(const PortName& name) const;
	bool contains(const PortName& name) const { return ports_.contains(name); }

	// Requires a registered output as source and a registered input as sink.
	Connection connect(const PortName& source, const PortName& sink);
	bool disconnect(ConnectionId id);

	const std::vector<Connection>& connections() const { return connections_; }
	std::vector<Connection> connections_from(const PortName& source) const;
	std::vector<Endpoint> endpoints() const;

private:
	std::map<PortName, Endpoint> ports_;
	std::vector<Connection> connections_;
	std::uint64_t next_connection_ = 1;
};

} // namespace spikeworks::iobus
