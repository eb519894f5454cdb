#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "spikeworks/iobus/registry.hpp"

namespace spikeworks::iobus {

// Length-prefixed frame server on its own I/O thread. Every complete frame
// body is handed to the handler; a returned string is framed and sent back
// on the same connection before the next frame is read.
class FrameServer {
public:
	using Handler = std::function<std::optional<std::string>(const std::string& body)>;

	// Binds immediately; port 0 picks an ephemeral port.
	FrameServer(const std::string& host, std::uint16_t port, Handler handler);
	~FrameServer();

	FrameServer(const FrameServer&) = delete;
	FrameServer& operator=(const FrameServer&) = delete;

	TcpAddress address() const;
	// Connections dropped because of malformed or oversized frames.
	std::uint64_t protocol_errors() const;
	void stop();

private:
	struct Impl;
	std::unique_ptr<Impl> impl_;
};

// Blocking client for the same framing. Not thread-safe; callers serialize.
class FrameClient {
public:
	explicit FrameClient(const TcpAddress& address);
	~FrameClient();

	FrameClient(const FrameClient&) = delete;
	FrameClient& operator=(const FrameClient&) = delete;

	void send(std::span<const std::uint8_t> frame);
	// Reads one frame body; throws FrameError or std::runtime_error on failure.
	std::string receive();
	std::string request(std::string_view body);

private:
	struct Impl;
	std::unique_ptr<Impl> impl_;
};

} // namespace spikeworks::iobus
