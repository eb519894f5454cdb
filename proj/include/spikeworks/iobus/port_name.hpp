#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace spikeworks::iobus {

// Slash-separated port path such as "/epuck/sensors/ps". Segments are
// non-empty and limited to [A-Za-z0-9_.-].
class PortName {
public:
	// Throws std::invalid_argument for malformed paths.
	explicit PortName(std::string path);

	static bool is_valid(std::string_view path);

	const std::string& str() const { return path_; }

	friend auto operator<=>(const PortName&, const PortName&) = default;

private:
	std::string path_;
};

enum class Direction { output, input };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view text);

} // namespace spikeworks::iobus
