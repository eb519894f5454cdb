#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spikeworks/sim/geometry.hpp"

namespace spikeworks::sim {

// Step increments reported by the wheel encoders at one sensor event.
struct StepEvent {
	std::int64_t d_steps_left = 0;
	std::int64_t d_steps_right = 0;
	double dt_s = 0.0;

	friend bool operator==(const StepEvent&, const StepEvent&) = default;
};

// Cumulative wheel step counters.
//
// Wheel rotation is accumulated exactly and the reported counters are the
// rounded totals, so (steps / steps_per_rev) * 2 pi r stays within half a step
// of the true arc length no matter how finely the motion is sliced.
class WheelOdometry {
public:
	explicit WheelOdometry(const RobotGeometry& geometry = {});

	void advance(double v_left, double v_right, double dt_s);

	std::int64_t steps_left() const;
	std::int64_t steps_right() const;

	// Arc length each wheel has rolled, signed (m).
	double arc_left() const;
	double arc_right() const;

	// Increments since the previous event (or since construction).
	StepEvent take_event(std::int64_t now_ms);
	std::int64_t last_event_ms() const { return last_event_ms_; }

private:
	RobotGeometry geometry_;
	double revs_left_ = 0.0;
	double revs_right_ = 0.0;
	std::int64_t reported_left_ = 0;
	std::int64_t reported_right_ = 0;
	std::int64_t last_event_ms_ = 0;
};

// Wheel speed implied by a step increment: (steps / (steps_per_rev / 2)) * pi r / dt.
double wheel_speed_from_steps(std::int64_t d_steps, double dt_s, const RobotGeometry& geometry);

// Dead-reckons a path from encoder events. Each event's wheel speeds feed one
// Euler step of the unicycle model. The result holds the start pose followed
// by one pose per event. Throws std::invalid_argument if any dt <= 0.
std::vector<Pose> reconstruct_trajectory(std::span<const StepEvent> events, const Pose& start,
                                         const RobotGeometry& geometry = {});

} // namespace spikeworks::sim
