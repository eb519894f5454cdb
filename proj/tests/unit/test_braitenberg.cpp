#include <doctest.h>

#include <set>
#include <string>
#include <tuple>

#include "spikeworks/braitenberg/epuck_network.hpp"
#include "spikeworks/codec/decoder.hpp"
#include "spikeworks/codec/encoders.hpp"
#include "spikeworks/codec/rate_window.hpp"

using namespace spikeworks;
using namespace spikeworks::braitenberg;

namespace {

using Edge = std::tuple<std::string, std::string, double, std::uint32_t>;

std::set<Edge> edges(const snn::Network& net)
{
	std::set<Edge> out;
	for (const auto& s : net.synapses())
		out.insert({net.describe(s.pre), net.describe(s.post), s.weight, s.delay_ms});
	return out;
}

std::set<std::string> targets(const snn::Network& net, const std::string& pre)
{
	std::set<std::string> out;
	for (const auto& s : net.synapses())
		if (net.describe(s.pre) == pre)
			out.insert(net.describe(s.post));
	return out;
}

} // namespace

TEST_CASE("default build has the expected groups and synapse count")
{
	const auto e = build_epuck_network();
	const auto& net = e.network;
	CHECK(net.neuron_count() == 14);
	CHECK(net.groups().size() == 4);
	CHECK(net.group(e.ps).name == "ctx.ps");
	CHECK(net.group(e.ps).size == 8);
	CHECK(net.group(e.tof).name == "ctx.tof");
	CHECK(net.group(e.tof).size == 2);
	CHECK(net.group(e.vel_left).name == "ctx.vel_left");
	CHECK(net.group(e.vel_right).name == "ctx.vel_right");
	CHECK(net.group(e.vel_left).size == 2);
	CHECK(net.group(e.ps).kind == snn::NeuronKind::sensory);
	CHECK(net.group(e.vel_right).kind == snn::NeuronKind::motor);

	// Oracle: enumerate the rule directly.
	std::size_t expected = 0;
	for (std::uint32_t i = 0; i < 8; ++i)
		expected += 2;
	expected += 2 + 2;
	CHECK(net.synapses().size() == expected);
	CHECK(net.synapses().size() == 20);
	for (const auto& s : net.synapses()) {
		CHECK(s.weight > 0.0);
		CHECK(s.delay_ms == 1);
	}
}

TEST_CASE("front-right and left sensors target the documented motors")
{
	const auto e = build_epuck_network();
	CHECK(targets(e.network, "ctx.ps[1]") == std::set<std::string>{"ctx.vel_right[0]", "ctx.vel_left[1]"});
	CHECK(targets(e.network, "ctx.ps[5]") == std::set<std::string>{"ctx.vel_left[0]", "ctx.vel_right[1]"});
	CHECK(targets(e.network, "ctx.tof[0]") == std::set<std::string>{"ctx.vel_left[0]", "ctx.vel_right[0]"});
	CHECK(targets(e.network, "ctx.tof[1]") == std::set<std::string>{"ctx.vel_left[1]", "ctx.vel_right[1]"});
	for (std::uint32_t i = 0; i < 8; ++i) {
		const auto t = targets(e.network, "ctx.ps[" + std::to_string(i) + "]");
		CHECK(t.size() == 2);
		const auto side = side_of(i);
		const std::string same = side == Side::right ? "ctx.vel_right" : "ctx.vel_left";
		const std::string other = side == Side::right ? "ctx.vel_left" : "ctx.vel_right";
		CHECK(t.contains(same + "[0]"));
		CHECK(t.contains(other + "[1]"));
	}
}

TEST_CASE("sensor sides follow the angle table")
{
	CHECK(side_of(1) == Side::right);
	CHECK(side_of(5) == Side::left);
	CHECK(side_of(3) == Side::right);
	CHECK(side_of(0) == Side::right);
	CHECK(side_of(7) == Side::left);
	CHECK(opposite(Side::left) == Side::right);
	CHECK(to_string(Side::left) == "left");

	sim::SensorLayout odd;
	odd.angles_rad[2] = 0.0;
	CHECK_THROWS(side_of(2, odd));
	CHECK_THROWS(side_of(8));
}

TEST_CASE("wiring is mirror symmetric")
{
	const auto e = build_epuck_network();
	const auto original = edges(e.network);
	auto mirror = [](const std::string& ref) {
		auto [group, index] = snn::parse_neuron_spec(ref);
		if (group == "ctx.ps")
			index = 7 - index;
		else if (group == "ctx.vel_left")
			group = "ctx.vel_right";
		else if (group == "ctx.vel_right")
			group = "ctx.vel_left";
		return group + "[" + std::to_string(index) + "]";
	};
	std::set<Edge> reflected;
	for (const auto& [pre, post, w, d] : original)
		reflected.insert({mirror(pre), mirror(post), w, d});
	CHECK(reflected == original);
}

TEST_CASE("builder parameters are applied")
{
	BraitenbergConfig cfg;
	cfg.excitatory_weight = 31.0;
	cfg.delay_ms = 3;
	cfg.motor_noise = 0.0;
	cfg.motor_params = {0.1, 0.2, -65.0, 2.0};
	const auto e = build_epuck_network(cfg);
	for (const auto& s : e.network.synapses()) {
		CHECK(s.weight == 31.0);
		CHECK(s.delay_ms == 3);
	}
	CHECK(e.network.group(e.vel_left).params == snn::IzhikevichParams{0.1, 0.2, -65.0, 2.0});
	CHECK(e.network.group(e.vel_left).noise_sigma == 0.0);
	CHECK(e.motor_group(Side::right) == e.vel_right);

	snn::Network base;
	base.add_group("extra", 3);
	const auto ext = build_epuck_network(std::move(base), {});
	CHECK(ext.network.neuron_count() == 17);
	CHECK(ext.network.find_group("extra").has_value());
	CHECK_THROWS(build_epuck_network(ext.network, {}));
}

TEST_CASE("a wall on the right turns the robot left")
{
	for (std::uint64_t seed : {1u, 2u, 3u}) {
		CAPTURE(seed);
		auto e = build_epuck_network();
		snn::Rng rng(seed);
		const codec::EncoderConfig prox{60.0, 0.0, 60.0};
		const auto tof = codec::encode_tof(0.3, {});
		snn::CurrentMap in;
		// Right-side sensors see a close wall, the left side sees nothing.
		for (std::uint32_t i = 0; i < 8; ++i)
			in[{e.ps, i}] = codec::encode_proximity(side_of(i) == Side::right && i < 2 ? 0.8 : 0.0, prox);
		in[{e.tof, kTofClear}] = tof.clear;
		in[{e.tof, kTofObstacle}] = tof.obstacle;

		codec::RateWindow lf(1), lb(1), rf(1), rb(1);
		bool turned = false;
		for (std::int64_t t = 0; t < 500 && !turned; ++t) {
			std::vector<std::uint32_t> f_lf, f_lb, f_rf, f_rb;
			for (const auto& s : e.network.advance(t, in, rng)) {
				if (s.group == e.vel_left)
					(s.index == kForward ? f_lf : f_lb).push_back(0);
				if (s.group == e.vel_right)
					(s.index == kForward ? f_rf : f_rb).push_back(0);
			}
			lf.push_tick(t, f_lf);
			lb.push_tick(t, f_lb);
			rf.push_tick(t, f_rf);
			rb.push_tick(t, f_rb);
			const double vl = codec::decode_wheel(lf, lb, {});
			const double vr = codec::decode_wheel(rf, rb, {});
			turned = t >= 100 && vr > vl;
		}
		CHECK(turned);
	}
}
