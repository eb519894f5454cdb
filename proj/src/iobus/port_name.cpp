#include "spikeworks/iobus/port_name.hpp"

#include <cctype>
#include <stdexcept>

namespace spikeworks::iobus {

bool PortName::is_valid(std::string_view path)
{
	if (path.size() < 2 || path.front() != '/' || path.back() == '/')
		return false;
	char prev = '\0';
	for (const char ch : path) {
		if (ch == '/') {
			if (prev == '/')
				return false;
		} else if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-' && ch != '.') {
			return false;
		}
		prev = ch;
	}
	return true;
}

PortName::PortName(std::string path) : path_(std::move(path))
{
	if (!is_valid(path_))
		throw std::invalid_argument("malformed port name '" + path_ + "'");
}

std::string_view to_string(Direction d) { return d == Direction::output ? "output" : "input"; }

Direction parse_direction(std::string_view text)
{
	if (text == "output")
		return Direction::output;
	if (text == "input")
		return Direction::input;
	throw std::invalid_argument("direction must be 'output' or 'input'");
}

} // namespace spikeworks::iobus
