#include "spikeworks/sim/world.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace spikeworks::sim {

namespace {

World box_world()
{
	constexpr double side = 0.8;
	World w;
	w.name = "box";
	w.walls = {
		{{0.0, 0.0}, {side, 0.0}},
		{{side, 0.0}, {side, side}},
		{{side, side}, {0.0, side}},
		{{0.0, side}, {0.0, 0.0}},
	};
	return w;
}

// Stem 0.32 m wide and 0.8 m long, centred on x = 0.16 so the default start
// pose sits in it; the crossbar is 0.32 m deep and 1.12 m wide.
World tmaze_world()
{
	constexpr double stem_l = 0.0, stem_r = 0.32, stem_top = 0.8;
	constexpr double bar_l = -0.4, bar_r = 0.72, bar_top = 1.12;
	World w;
	w.name = "tmaze";
	w.walls = {
		{{stem_l, 0.0}, {stem_r, 0.0}},
		{{stem_l, 0.0}, {stem_l, stem_top}},
		{{stem_r, 0.0}, {stem_r, stem_top}},
		{{bar_l, stem_top}, {stem_l, stem_top}},
		{{stem_r, stem_top}, {bar_r, stem_top}},
		{{bar_l, bar_top}, {bar_r, bar_top}},
		{{bar_l, stem_top}, {bar_l, bar_top}},
		{{bar_r, stem_top}, {bar_r, bar_top}},
	};
	return w;
}

} // namespace

void World::validate() const
{
	for (const auto& s : walls) {
		if (!std::isfinite(s.a.x) || !std::isfinite(s.a.y) || !std::isfinite(s.b.x) || !std::isfinite(s.b.y))
			throw std::invalid_argument("wall coordinates must be finite");
		if (norm(s.b - s.a) <= 0.0)
			throw std::invalid_argument("wall segments must have non-zero length");
	}
	if (!std::isfinite(start.x) || !std::isfinite(start.y) || !std::isfinite(start.theta))
		throw std::invalid_argument("start pose must be finite");
}

std::vector<std::string> world_presets() { return {"box", "tmaze"}; }

World preset_world(std::string_view name)
{
	if (name == "box")
		return box_world();
	if (name == "tmaze")
		return tmaze_world();
	throw std::invalid_argument("unknown world preset '" + std::string(name) + "'");
}

World load_world(const nlohmann::json& descriptor)
try {
	if (descriptor.is_string())
		return preset_world(descriptor.get<std::string>());
	if (!descriptor.is_object())
		throw std::invalid_argument("world descriptor must be a preset name or an object");

	World w;
	if (descriptor.contains("preset"))
		w = preset_world(descriptor.at("preset").get<std::string>());
	if (descriptor.contains("name"))
		w.name = descriptor.at("name").get<std::string>();
	if (descriptor.contains("walls")) {
		w.walls.clear();
		for (const auto& seg : descriptor.at("walls")) {
			if (!seg.is_array() || seg.size() != 4)
				throw std::invalid_argument("walls are [x1, y1, x2, y2] arrays");
			w.walls.push_back({{seg[0].get<double>(), seg[1].get<double>()},
			                   {seg[2].get<double>(), seg[3].get<double>()}});
		}
	}
	if (descriptor.contains("start")) {
		const auto& s = descriptor.at("start");
		if (!s.is_array() || s.size() != 3)
			throw std::invalid_argument("start pose is [x, y, theta]");
		w.start = {s[0].get<double>(), s[1].get<double>(), normalize_angle(s[2].get<double>())};
	}
	if (w.name.empty())
		w.name = "custom";
	w.validate();
	return w;
} catch (const nlohmann::json::exception& e) {
	throw std::invalid_argument("malformed world descriptor: " + std::string(e.what()));
}

World load_world(std::string_view name_or_path)
{
	for (const auto& preset : world_presets())
		if (name_or_path == preset)
			return preset_world(preset);

	std::ifstream in{std::filesystem::path(name_or_path)};
	if (!in)
		throw std::invalid_argument("world '" + std::string(name_or_path) +
		                            "' is neither a preset nor a readable file");
	nlohmann::json j;
	try {
		in >> j;
	} catch (const nlohmann::json::exception& e) {
		throw std::invalid_argument("malformed world file: " + std::string(e.what()));
	}
	return load_world(j);
}

nlohmann::json to_json(const World& world)
{
	nlohmann::json walls = nlohmann::json::array();
	for (const auto& s : world.walls)
		walls.push_back({s.a.x, s.a.y, s.b.x, s.b.y});
	return {{"name", world.name},
	        {"walls", walls},
	        {"start", {world.start.x, world.start.y, world.start.theta}}};
}

} // namespace spikeworks::sim
