#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "spikeworks/sim/geometry.hpp"
#include "spikeworks/sim/kinematics.hpp"
#include "spikeworks/sim/odometry.hpp"
#include "spikeworks/sim/sensors.hpp"
#include "spikeworks/sim/trajectory_csv.hpp"
#include "spikeworks/sim/world.hpp"

using namespace spikeworks::sim;
using std::numbers::pi;

namespace {

const RobotGeometry geo;

World single_wall(Segment s)
{
	World w;
	w.name = "wall";
	w.walls = {s};
	return w;
}

Vec2 rotate(Vec2 p, double a) { return {p.x * std::cos(a) - p.y * std::sin(a), p.x * std::sin(a) + p.y * std::cos(a)}; }

} // namespace

TEST_CASE("equal wheel speeds move straight by exactly v dt")
{
	for (double dt : {0.001, 0.128, 2.5}) {
		const Pose p0{0.1, -0.2, 0.3};
		const auto p1 = step_robot(p0, 0.07, 0.07, dt, geo);
		CHECK(p1.theta == p0.theta);
		CHECK(p1.x == doctest::Approx(p0.x + 0.07 * dt * std::cos(0.3)).epsilon(1e-14));
		CHECK(p1.y == doctest::Approx(p0.y + 0.07 * dt * std::sin(0.3)).epsilon(1e-14));
		CHECK(std::hypot(p1.x - p0.x, p1.y - p0.y) == doctest::Approx(0.07 * dt).epsilon(1e-12));
	}
}

TEST_CASE("opposite wheel speeds rotate in place")
{
	const Pose p0{0.4, 0.4, 0.0};
	const auto p1 = step_robot(p0, -0.05, 0.05, 0.1, geo);
	CHECK(p1.x == p0.x);
	CHECK(p1.y == p0.y);
	CHECK(p1.theta == doctest::Approx(0.1 * 0.1 / 0.055));
	CHECK(angular_velocity(-0.05, 0.05, geo) > 0.0);
}

TEST_CASE("unequal wheels follow the analytic circle")
{
	const double vl = 0.1, vr = 0.05;
	CHECK(linear_velocity(vl, vr) == doctest::Approx(0.075));
	const double w = angular_velocity(vl, vr, geo);
	// Faster left wheel: clockwise turn of magnitude 0.05 / 0.055.
	CHECK(w == doctest::Approx(-0.05 / 0.055));
	CHECK(std::abs(w) == doctest::Approx(0.9091).epsilon(1e-4));
	const double radius = linear_velocity(vl, vr) / std::abs(w);
	CHECK(radius == doctest::Approx(0.0825).epsilon(1e-12));

	const Pose start{0.3, 0.3, 0.0};
	// Clockwise circle: centre lies to the right of the heading.
	const Vec2 centre{start.x + radius * std::sin(start.theta), start.y - radius * std::cos(start.theta)};
	const auto ticks = static_cast<int>(std::llround(2 * pi / std::abs(w) / 0.001));
	Pose p = start;
	double max_dev = 0.0;
	for (int i = 0; i < ticks; ++i) {
		p = step_robot(p, vl, vr, 0.001, geo);
		const double r = norm(p.position() - centre);
		max_dev = std::max(max_dev, std::abs(r - radius) / radius);
		REQUIRE(p.theta > -pi);
		REQUIRE(p.theta <= pi);
	}
	CHECK(std::hypot(p.x - start.x, p.y - start.y) < 1e-3);
	CHECK(max_dev < 0.005);
}

TEST_CASE("kinematics input validation")
{
	CHECK_THROWS_AS(step_robot({}, 0.1, 0.1, 0.0, geo), std::invalid_argument);
	CHECK_THROWS_AS(step_robot({}, 0.1, 0.1, -1.0, geo), std::invalid_argument);
	CHECK_THROWS_AS(step_robot({}, std::nan(""), 0.1, 0.001, geo), std::invalid_argument);
	CHECK_THROWS_AS(step_robot({0, INFINITY, 0}, 0.1, 0.1, 0.001, geo), std::invalid_argument);
	CHECK_THROWS_AS((RobotGeometry{0.0, 0.055, 1000, 0.037}.validate()), std::invalid_argument);
}

TEST_CASE("angles normalize to the half-open interval")
{
	CHECK(normalize_angle(pi) == pi);
	CHECK(normalize_angle(-pi) == pi);
	CHECK(normalize_angle(3 * pi) == doctest::Approx(pi));
	CHECK(normalize_angle(2 * pi + 0.5) == doctest::Approx(0.5));
	CHECK(normalize_angle(-0.5) == -0.5);
}

TEST_CASE("reconstruction arithmetic for one event")
{
	const double v = wheel_speed_from_steps(64, 0.128, geo);
	CHECK(v == doctest::Approx(64.0 / 500.0 * pi * 0.0215 / 0.128));
	CHECK(v == doctest::Approx(0.0675).epsilon(1e-3));

	const StepEvent ev{64, 64, 0.128};
	const auto path = reconstruct_trajectory(std::span(&ev, 1), kDefaultStartPose, geo);
	REQUIRE(path.size() == 2);
	CHECK(path[0] == kDefaultStartPose);
	const double d = std::hypot(path[1].x - path[0].x, path[1].y - path[0].y);
	CHECK(d == doctest::Approx(v * 0.128));
	CHECK(d == doctest::Approx(0.00864).epsilon(1e-3));
	CHECK(path[1].theta == kDefaultStartPose.theta);
	CHECK(path[1].x - path[0].x == doctest::Approx(path[1].y - path[0].y));

	const StepEvent bad{1, 1, 0.0};
	CHECK_THROWS_AS(reconstruct_trajectory(std::span(&bad, 1), kDefaultStartPose, geo), std::invalid_argument);
}

TEST_CASE("default start pose")
{
	CHECK(kDefaultStartPose.x == 0.16);
	CHECK(kDefaultStartPose.y == 0.16);
	CHECK(kDefaultStartPose.theta == doctest::Approx(pi / 4));
}

TEST_CASE("step counters track the integrated arc within one step per event")
{
	std::mt19937_64 rng(3);
	std::uniform_real_distribution<double> speed(-0.12, 0.12);
	WheelOdometry odo(geo);
	const double step_len = 2 * pi * geo.wheel_radius / geo.steps_per_rev;
	double arc_l = 0.0, arc_r = 0.0;
	std::int64_t prev_l = 0, prev_r = 0;
	double vl = 0, vr = 0;
	for (int t = 0; t < 20000; ++t) {
		if (t % 250 == 0) {
			vl = speed(rng);
			vr = speed(rng);
		}
		odo.advance(vl, vr, 0.001);
		arc_l += vl * 0.001;
		arc_r += vr * 0.001;
		if ((t + 1) % 128 == 0) {
			const auto ev = odo.take_event(t + 1);
			CHECK(ev.d_steps_left == odo.steps_left() - prev_l);
			CHECK(ev.d_steps_right == odo.steps_right() - prev_r);
			prev_l = odo.steps_left();
			prev_r = odo.steps_right();
			REQUIRE(std::abs(odo.steps_left() * step_len - arc_l) <= step_len);
			REQUIRE(std::abs(odo.steps_right() * step_len - arc_r) <= step_len);
		}
	}
	CHECK(odo.arc_left() == doctest::Approx(arc_l));
}

TEST_CASE("odometry round-trip over a smooth drive")
{
	Pose truth = kDefaultStartPose;
	WheelOdometry odo(geo);
	std::vector<StepEvent> events;
	double path = 0.0;
	for (int t = 0; t < 30000; ++t) {
		const double s = t * 0.001;
		const double vl = 0.06 + 0.02 * std::sin(0.7 * s);
		const double vr = 0.06 + 0.02 * std::cos(0.5 * s);
		const auto next = step_robot(truth, vl, vr, 0.001, geo);
		path += std::hypot(next.x - truth.x, next.y - truth.y);
		truth = next;
		odo.advance(vl, vr, 0.001);
		if ((t + 1) % 128 == 0)
			events.push_back(odo.take_event(t + 1));
	}
	const auto rec = reconstruct_trajectory(events, kDefaultStartPose, geo);
	REQUIRE(rec.size() == events.size() + 1);
	// Compare at the last event boundary.
	Pose at_event = kDefaultStartPose;
	for (std::size_t i = 0; i < events.size() * 128; ++i) {
		const double s = i * 0.001;
		at_event = step_robot(at_event, 0.06 + 0.02 * std::sin(0.7 * s), 0.06 + 0.02 * std::cos(0.5 * s), 0.001, geo);
	}
	const double err = std::hypot(rec.back().x - at_event.x, rec.back().y - at_event.y);
	CHECK(err < 0.01 * path);
}

TEST_CASE("sensors in an empty world")
{
	World empty;
	empty.name = "empty";
	const auto f = read_sensors(empty, {0, 0, 0}, geo);
	for (double v : f.ps)
		CHECK(v == 0.0);
	CHECK(f.tof == 2.0);
	CHECK(std::isinf(clearance(empty, {})));
	CHECK_FALSE(check_collision(empty, {}, geo));
}

TEST_CASE("wall straight ahead")
{
	// Robot at origin facing +x; wall 0.03 m in front of the body surface.
	const double x_wall = geo.body_radius + 0.03;
	const auto w = single_wall({{x_wall, -1.0}, {x_wall, 1.0}});
	const auto f = read_sensors(w, {0, 0, 0}, geo);
	CHECK(f.tof == doctest::Approx(0.03).epsilon(1e-12));

	const SensorLayout layout;
	for (std::size_t i : {0u, 7u}) {
		const double a = layout.angles_rad[i];
		const double d = x_wall / std::cos(a) - geo.body_radius;
		CHECK(f.ps[i] > 0.0);
		CHECK(f.ps[i] == doctest::Approx(1.0 - d / 0.06).epsilon(1e-9));
	}
	// Sensors facing sideways or backwards never see it.
	for (std::size_t i : {2u, 3u, 4u, 5u})
		CHECK(f.ps[i] == 0.0);
	CHECK(f.ps[0] == doctest::Approx(f.ps[7]));
}

TEST_CASE("ps1 reads zero at the edge of its range")
{
	const SensorLayout layout;
	const double a = layout.angles_rad[1];
	CHECK(a == doctest::Approx(-pi / 4));
	// Wall perpendicular to ps1's ray, 0.06 m beyond the body surface.
	const Vec2 dir = unit_from_angle(a);
	const Vec2 hit = (geo.body_radius + 0.06) * dir;
	const Vec2 along{-dir.y, dir.x};
	const auto w = single_wall({hit - 0.5 * along, hit + 0.5 * along});
	const auto f = read_sensors(w, {0, 0, 0}, geo);
	CHECK(f.ps[1] == doctest::Approx(0.0));
	CHECK(cast_ray(w, {0, 0, 0}, a, geo) == doctest::Approx(0.06).epsilon(1e-12));

	const auto w2 = single_wall({hit - 0.5 * along - 0.01 * dir, hit + 0.5 * along - 0.01 * dir});
	CHECK(read_sensors(w2, {0, 0, 0}, geo).ps[1] == doctest::Approx(1.0 - 0.05 / 0.06));
}

TEST_CASE("sensor readings are invariant under rigid motion")
{
	std::mt19937_64 rng(17);
	std::uniform_real_distribution<double> u(-0.3, 0.3), ang(-pi, pi);
	for (int trial = 0; trial < 50; ++trial) {
		World w;
		w.name = "random";
		for (int i = 0; i < 6; ++i)
			w.walls.push_back({{u(rng), u(rng)}, {u(rng), u(rng)}});
		const Pose p{0.0, 0.0, ang(rng)};
		const double rot = ang(rng);
		const Vec2 shift{u(rng), u(rng)};
		World moved = w;
		for (auto& s : moved.walls) {
			s.a = rotate(s.a, rot) + shift;
			s.b = rotate(s.b, rot) + shift;
		}
		const Vec2 pos = rotate(p.position(), rot) + shift;
		const Pose q{pos.x, pos.y, normalize_angle(p.theta + rot)};
		const auto f1 = read_sensors(w, p, geo);
		const auto f2 = read_sensors(moved, q, geo);
		for (std::size_t i = 0; i < kProximitySensors; ++i)
			CHECK(f1.ps[i] == doctest::Approx(f2.ps[i]).epsilon(1e-9));
		CHECK(f1.tof == doctest::Approx(f2.tof).epsilon(1e-9));
		CHECK(clearance(w, p) == doctest::Approx(clearance(moved, q)).epsilon(1e-9));
	}
}

TEST_CASE("sensor values stay in range")
{
	const auto box = preset_world("box");
	std::mt19937_64 rng(5);
	std::uniform_real_distribution<double> u(0.04, 0.76), ang(-pi, pi);
	for (int i = 0; i < 500; ++i) {
		const auto f = read_sensors(box, {u(rng), u(rng), ang(rng)}, geo);
		for (double v : f.ps) {
			REQUIRE(v >= 0.0);
			REQUIRE(v <= 1.0);
		}
		REQUIRE(f.tof >= 0.0);
		REQUIRE(f.tof <= 2.0);
	}
}

TEST_CASE("collision uses a strict inequality")
{
	const auto w = single_wall({{-1.0, 0.0}, {1.0, 0.0}});
	CHECK_FALSE(check_collision(w, {0.0, 0.5, 0.0}, geo));
	CHECK(check_collision(w, {0.0, 0.01, 0.0}, geo));
	CHECK_FALSE(check_collision(w, {0.0, geo.body_radius, 0.0}, geo));
	CHECK(check_collision(w, {0.0, std::nextafter(geo.body_radius, 0.0), 0.0}, geo));
	// Past the end of the segment the distance is to the endpoint.
	CHECK_FALSE(check_collision(w, {1.03, 0.03, 0.0}, geo));
	CHECK(check_collision(w, {1.02, 0.02, 0.0}, geo));
	CHECK_FALSE(check_collision(preset_world("box"), kDefaultStartPose, geo));
}

TEST_CASE("segment geometry helpers")
{
	const Segment s{{0, 0}, {1, 0}};
	CHECK(distance_to_segment({0.5, 2.0}, s) == 2.0);
	CHECK(distance_to_segment({-3.0, 4.0}, s) == 5.0);
	CHECK(ray_hit_distance({0.5, -1.0}, {0, 1}, s) == doctest::Approx(1.0));
	CHECK(ray_hit_distance({0.5, 1.0}, {0, 1}, s) < 0.0);
	CHECK(ray_hit_distance({2.0, -1.0}, {0, 1}, s) < 0.0);
	CHECK(ray_hit_distance({-1.0, 0.0}, {1, 0}, s) == doctest::Approx(1.0));
}

TEST_CASE("preset worlds")
{
	const auto names = world_presets();
	CHECK(std::find(names.begin(), names.end(), "box") != names.end());
	CHECK(std::find(names.begin(), names.end(), "tmaze") != names.end());

	const auto box = preset_world("box");
	CHECK(box.walls.size() == 4);
	double min_x = 1e9, max_x = -1e9, min_y = 1e9, max_y = -1e9;
	for (const auto& s : box.walls)
		for (const auto& p : {s.a, s.b}) {
			min_x = std::min(min_x, p.x);
			max_x = std::max(max_x, p.x);
			min_y = std::min(min_y, p.y);
			max_y = std::max(max_y, p.y);
		}
	CHECK(max_x - min_x == doctest::Approx(0.8));
	CHECK(max_y - min_y == doctest::Approx(0.8));

	const auto t = preset_world("tmaze");
	CHECK_NOTHROW(t.validate());
	CHECK(clearance(t, t.start) > geo.body_radius);
	CHECK_THROWS(preset_world("moon"));
}

TEST_CASE("world descriptors")
{
	const auto w = load_world(nlohmann::json::parse(
	    R"({"name":"corridor","walls":[[0,0,1,0],[0,0.2,1,0.2]],"start":[0.1,0.1,0]})"));
	CHECK(w.name == "corridor");
	CHECK(w.walls.size() == 2);
	CHECK(w.start == Pose{0.1, 0.1, 0.0});

	const auto again = load_world(to_json(w));
	CHECK(again.walls.size() == 2);
	CHECK(again.walls[1].b == Vec2{1, 0.2});
	CHECK(load_world(nlohmann::json("box")).walls.size() == 4);
	CHECK(load_world(nlohmann::json::parse(R"({"preset":"tmaze"})")).name == "tmaze");
	CHECK(load_world(std::string_view("box")).name == "box");

	CHECK_THROWS_AS(load_world(nlohmann::json::parse(R"({"walls":[[0,0,0,0]]})")), std::invalid_argument);
	CHECK_THROWS_AS(load_world(nlohmann::json::parse(R"({"walls":[[0,0,1]]})")), std::invalid_argument);
	CHECK_THROWS_AS(load_world(nlohmann::json::parse(R"({"walls":"no"})")), std::invalid_argument);
	CHECK_THROWS(load_world(std::string_view("/nonexistent/world.json")));
}

TEST_CASE("trajectory csv")
{
	std::ostringstream out;
	const std::vector<TrajectorySample> s{{0, {0.16, 0.16, 0.7853981633974483}}, {10, {0.1, -0.25, 1e-20}}};
	write_trajectory_csv(out, s);
	CHECK(out.str() == "t_ms,x,y,theta\n0,0.16,0.16,0.7853981633974483\n10,0.1,-0.25,1e-20\n");
	CHECK(format_number(0.1) == "0.1");
	CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
