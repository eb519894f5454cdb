#pragma once

#include <numbers>

namespace spikeworks::sim {

struct Vec2 {
	double x = 0.0;
	double y = 0.0;

	friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
	friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
	friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
	friend bool operator==(const Vec2&, const Vec2&) = default;
};

double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);
double norm(Vec2 a);
Vec2 unit_from_angle(double theta);

struct Segment {
	Vec2 a;
	Vec2 b;
};

double distance_to_segment(Vec2 p, const Segment& s);

// Distance along a unit ray to the first intersection with the segment, or a
// negative value when the ray misses.
double ray_hit_distance(Vec2 origin, Vec2 direction, const Segment& s);

// Heading in (-pi, pi], counterclockwise positive, 0 along +x.
double normalize_angle(double theta);

struct Pose {
	double x = 0.0;
	double y = 0.0;
	double theta = 0.0;

	Vec2 position() const { return {x, y}; }
	friend bool operator==(const Pose&, const Pose&) = default;
};

// E-Puck body and drive geometry.
struct RobotGeometry {
	double wheel_radius = 0.0215; // m
	double axle_length = 0.055;   // m
	double steps_per_rev = 1000.0;
	double body_radius = 0.037;   // m

	void validate() const;
};

constexpr Pose kDefaultStartPose{0.16, 0.16, std::numbers::pi / 4.0};

} // namespace spikeworks::sim
