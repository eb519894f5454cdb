#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace spikeworks::iobus {

// Timestamped float-vector message as carried on a port.
struct PortMessage {
	std::int64_t timestamp_ms = 0;
	std::string topic;
	std::vector<double> payload;

	friend bool operator==(const PortMessage&, const PortMessage&) = default;
};

class FrameError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// Frames larger than this are refused by the decoders.
constexpr std::uint32_t kMaxFrameBytes = 16u << 20;

// Wire format: 4-byte little-endian length N, then N bytes of UTF-8 text
// holding one compact JSON object (no trailing newline).
std::vector<std::uint8_t> frame_text(std::string_view text);

// {"t":<int>,"port":"<path>","data":[<f64>,...]}
std::string message_to_json_text(const PortMessage& message);
PortMessage message_from_json_text(std::string_view text);

std::vector<std::uint8_t> frame_tcp(const PortMessage& message);
// Requires exactly one complete frame; throws FrameError otherwise.
PortMessage unframe_tcp(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> frame_json(const nlohmann::ordered_json& object);
nlohmann::json unframe_json(std::span<const std::uint8_t> bytes);

// Incremental decoder for a byte stream of frames.
class FrameDecoder {
public:
	void feed(std::span<const std::uint8_t> bytes);
	// Next complete frame body, if any. Throws FrameError on oversize headers.
	std::optional<std::string> next();
	std::size_t buffered() const { return buffer_.size(); }

private:
	std::vector<std::uint8_t> buffer_;
};

std::uint32_t read_length_prefix(std::span<const std::uint8_t, 4> header);

} // namespace spikeworks::iobus
