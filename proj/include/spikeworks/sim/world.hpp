#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spikeworks/sim/geometry.hpp"

namespace spikeworks::sim {

// A static arena of wall segments. Immutable once loaded.
struct World {
	std::string name;
	std::vector<Segment> walls;
	Pose start = kDefaultStartPose;

	// Throws std::invalid_argument for non-finite or zero-length walls.
	void validate() const;
};

// Built-in arenas: "box" (0.8 m square) and "tmaze" (T-shaped corridor).
std::vector<std::string> world_presets();
World preset_world(std::string_view name);

// Descriptor form: {"name": ..., "walls": [[x1,y1,x2,y2], ...], "start": [x,y,theta]}
// or {"preset": "box"}. A bare string names a preset.
World load_world(const nlohmann::json& descriptor);

// A preset name, or a path to a JSON descriptor file.
World load_world(std::string_view name_or_path);

nlohmann::json to_json(const World& world);

} // namespace spikeworks::sim
