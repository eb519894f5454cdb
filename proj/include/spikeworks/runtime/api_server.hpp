#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "spikeworks/runtime/runner.hpp"

namespace spikeworks::runtime {

// {"groups": [...], "synapses": [...]}
nlohmann::ordered_json network_to_json(const snn::Network& network);

struct ApiOptions {
	std::string host = "127.0.0.1";
	std::uint16_t port = 0; // 0 picks a free port
	// Serves static files (the browser UI) for non-API paths when set.
	std::optional<std::filesystem::path> static_root;
};

struct ApiResponse {
	unsigned status = 200;
	std::string content_type = "application/json";
	std::string body;
};

// HTTP control API plus the /api/events WebSocket stream.
//
//   GET  /api/state
//   GET  /api/network
//   POST /api/control               {"cmd": ..., "n_ms"?, "factor"?}
//   POST /api/network/groups        idle only
//   POST /api/network/connections   idle only
//   WS   /api/events
class ApiServer {
public:
	ApiServer(Runner& runner, ApiOptions options = {});
	~ApiServer();

	ApiServer(const ApiServer&) = delete;
	ApiServer& operator=(const ApiServer&) = delete;

	std::uint16_t port() const;
	void stop();

	// Request dispatch without the network layer.
	ApiResponse handle(std::string_view method, std::string_view target, std::string_view body);

	struct Impl;

private:
	std::unique_ptr<Impl> impl_;
};

// "host:port" or ":port" / "port"; host defaults to 127.0.0.1.
ApiOptions parse_bind_address(std::string_view text);

} // namespace spikeworks::runtime
