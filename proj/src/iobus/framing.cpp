#include "spikeworks/iobus/framing.hpp"

#include <cmath>

#include "spikeworks/iobus/port_name.hpp"

namespace spikeworks::iobus {

std::uint32_t read_length_prefix(std::span<const std::uint8_t, 4> h)
{
	return std::uint32_t{h[0]} | (std::uint32_t{h[1]} << 8) | (std::uint32_t{h[2]} << 16) |
	       (std::uint32_t{h[3]} << 24);
}

std::vector<std::uint8_t> frame_text(std::string_view text)
{
	if (text.size() > kMaxFrameBytes)
		throw FrameError("frame body too large");
	const auto n = static_cast<std::uint32_t>(text.size());
	std::vector<std::uint8_t> out;
	out.reserve(4 + text.size());
	for (int shift = 0; shift < 32; shift += 8)
		out.push_back(static_cast<std::uint8_t>((n >> shift) & 0xffu));
	out.insert(out.end(), text.begin(), text.end());
	return out;
}

namespace {

std::string_view body_of_single_frame(std::span<const std::uint8_t> bytes)
{
	if (bytes.size() < 4)
		throw FrameError("truncated frame header");
	const auto n = read_length_prefix(bytes.first<4>());
	if (n > kMaxFrameBytes)
		throw FrameError("frame body too large");
	if (bytes.size() - 4 < n)
		throw FrameError("truncated frame body");
	if (bytes.size() - 4 > n)
		throw FrameError("trailing bytes after frame");
	return {reinterpret_cast<const char*>(bytes.data() + 4), n};
}

} // namespace

std::string message_to_json_text(const PortMessage& message)
{
	nlohmann::ordered_json j;
	j["t"] = message.timestamp_ms;
	j["port"] = message.topic;
	auto& data = j["data"] = nlohmann::ordered_json::array();
	for (const double x : message.payload) {
		if (!std::isfinite(x))
			throw FrameError("payload values must be finite");
		data.push_back(x);
	}
	return j.dump();
}

PortMessage message_from_json_text(std::string_view text)
{
	nlohmann::json j;
	try {
		j = nlohmann::json::parse(text);
	} catch (const nlohmann::json::parse_error& e) {
		throw FrameError(std::string("malformed message body: ") + e.what());
	}
	if (!j.is_object() || j.size() != 3 || !j.contains("t") || !j.contains("port") || !j.contains("data"))
		throw FrameError("message body must hold exactly t, port and data");
	const auto& t = j["t"];
	const auto& port = j["port"];
	const auto& data = j["data"];
	if (!t.is_number_integer() || !port.is_string() || !data.is_array())
		throw FrameError("message fields have the wrong types");
	if (!PortName::is_valid(port.get_ref<const std::string&>()))
		throw FrameError("message carries a malformed port name");

	PortMessage m;
	m.timestamp_ms = t.get<std::int64_t>();
	m.topic = port.get<std::string>();
	m.payload.reserve(data.size());
	for (const auto& x : data) {
		if (!x.is_number())
			throw FrameError("payload entries must be numbers");
		m.payload.push_back(x.get<double>());
	}
	return m;
}

std::vector<std::uint8_t> frame_tcp(const PortMessage& message)
{
	return frame_text(message_to_json_text(message));
}

PortMessage unframe_tcp(std::span<const std::uint8_t> bytes)
{
	return message_from_json_text(body_of_single_frame(bytes));
}

std::vector<std::uint8_t> frame_json(const nlohmann::ordered_json& object)
{
	return frame_text(object.dump());
}

nlohmann::json unframe_json(std::span<const std::uint8_t> bytes)
{
	const auto body = body_of_single_frame(bytes);
	try {
		return nlohmann::json::parse(body);
	} catch (const nlohmann::json::parse_error& e) {
		throw FrameError(std::string("malformed frame body: ") + e.what());
	}
}

void FrameDecoder::feed(std::span<const std::uint8_t> bytes)
{
	buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<std::string> FrameDecoder::next()
{
	if (buffer_.size() < 4)
		return std::nullopt;
	const auto n = read_length_prefix(std::span<const std::uint8_t, 4>(buffer_.data(), 4));
	if (n > kMaxFrameBytes)
		throw FrameError("frame body too large");
	if (buffer_.size() - 4 < n)
		return std::nullopt;
	std::string body(reinterpret_cast<const char*>(buffer_.data() + 4), n);
	buffer_.erase(buffer_.begin(), buffer_.begin() + 4 + n);
	return body;
}

} // namespace spikeworks::iobus
