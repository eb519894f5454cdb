#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "spikeworks/iobus/registry.hpp"
#include "spikeworks/iobus/tcp_link.hpp"

namespace spikeworks::iobus {

constexpr std::uint16_t kDefaultNameServerPort = 10000;

// Central name table reachable over TCP. Requests and replies are framed
// JSON objects:
//
//   {"op":"register","port":"/a","direction":"output"|"input","address":"host:port"?}
//   {"op":"unregister","port":"/a"}
//   {"op":"resolve","port":"/a"}
//   {"op":"connect","source":"/a","sink":"/b"}
//   {"op":"list"}
//
// Every reply carries "ok"; failures add "error".
class NameServer {
public:
	explicit NameServer(std::uint16_t port = kDefaultNameServerPort, const std::string& host = "127.0.0.1");

	TcpAddress address() const { return server_->address(); }
	void stop() { server_->stop(); }

	// Handles one decoded request; exposed for direct testing.
	nlohmann::ordered_json handle(const nlohmann::json& request);

private:
	std::mutex mutex_;
	Registry registry_;
	std::unique_ptr<FrameServer> server_;
};

class NameClient {
public:
	explicit NameClient(const TcpAddress& server);

	void register_port(const PortName& name, Direction direction,
	                   const std::optional<TcpAddress>& address = std::nullopt);
	bool unregister_port(const PortName& name);
	std::optional<Endpoint> resolve(const PortName& name);
	ConnectionId connect(const PortName& source, const PortName& sink);

	nlohmann::json request(const nlohmann::ordered_json& body);

private:
	FrameClient client_;
};

} // namespace spikeworks::iobus
