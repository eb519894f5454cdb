#include "spikeworks/sim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spikeworks::sim {

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a) { return std::hypot(a.x, a.y); }
Vec2 unit_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

double distance_to_segment(Vec2 p, const Segment& s)
{
	const Vec2 ab = s.b - s.a;
	const double len2 = dot(ab, ab);
	const double t = len2 > 0.0 ? std::clamp(dot(p - s.a, ab) / len2, 0.0, 1.0) : 0.0;
	return norm(p - (s.a + t * ab));
}

double ray_hit_distance(Vec2 origin, Vec2 direction, const Segment& s)
{
	const Vec2 edge = s.b - s.a;
	const Vec2 to_start = s.a - origin;
	const double denom = cross(direction, edge);
	constexpr double eps = 1e-12;

	if (std::abs(denom) < eps) {
		// Parallel; only a collinear overlap counts as a hit.
		if (std::abs(cross(to_start, direction)) > eps)
			return -1.0;
		const double ta = dot(s.a - origin, direction);
		const double tb = dot(s.b - origin, direction);
		if (ta < 0.0 && tb < 0.0)
			return -1.0;
		if (ta < 0.0 || tb < 0.0)
			return 0.0;
		return std::min(ta, tb);
	}

	const double t = cross(to_start, edge) / denom;
	const double u = cross(to_start, direction) / denom;
	if (t < 0.0 || u < 0.0 || u > 1.0)
		return -1.0;
	return t;
}

double normalize_angle(double theta)
{
	constexpr double two_pi = 2.0 * std::numbers::pi;
	double r = std::fmod(theta, two_pi);
	if (r <= -std::numbers::pi)
		r += two_pi;
	else if (r > std::numbers::pi)
		r -= two_pi;
	return r;
}

void RobotGeometry::validate() const
{
	if (!(wheel_radius > 0.0) || !(axle_length > 0.0) || !(steps_per_rev > 0.0) || !(body_radius > 0.0))
		throw std::invalid_argument("robot geometry values must be positive");
}

} // namespace spikeworks::sim
