#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <future>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>

#include <json.hpp>

#include "spikeworks/runtime/session.hpp"

namespace spikeworks::runtime {

// Best-effort wall-clock pacing: sleeps so that simulated time advances at
// rt_factor times wall time. Changing the factor re-anchors.
class Pacer {
public:
	using Clock = std::chrono::steady_clock;

	explicit Pacer(double rt_factor = 1.0) : factor_(rt_factor) {}

	void reset(std::int64_t sim_time_ms);
	void set_factor(double rt_factor, std::int64_t sim_time_ms);
	double factor() const { return factor_; }
	// Wall-clock instant at which sim_time_ms is due.
	Clock::time_point due(std::int64_t sim_time_ms) const;

private:
	double factor_;
	Clock::time_point anchor_wall_ = Clock::now();
	std::int64_t anchor_sim_ = 0;
};

// Event frames for live observers. A batch covers the ticks since the last
// flush; serialize() yields the spikes, pose and sensors frames.
struct EventBatch {
	std::int64_t t_from = 0;
	std::int64_t t_to = 0;
	std::vector<snn::SpikeEvent> spikes;
	std::vector<sim::TrajectorySample> poses;
	std::optional<sim::SensorFrame> sensors;
	SessionState state;

	bool empty() const { return spikes.empty() && poses.empty() && !sensors; }
	std::vector<std::string> serialize() const;
};

// Owns the simulation thread. Commands and queries are posted to a mailbox
// and run between ticks; the session is never touched from another thread.
class Runner {
public:
	using EventSink = std::function<void(const EventBatch&)>;

	static constexpr auto kBatchInterval = std::chrono::milliseconds(20);

	// With paced = false, running mode ticks as fast as possible.
	Runner(Session& session, bool paced = true);
	~Runner();

	Runner(const Runner&) = delete;
	Runner& operator=(const Runner&) = delete;

	// Runs fn(session) on the simulation thread and returns its result.
	// Exceptions thrown by fn are rethrown here.
	template <typename F>
	auto call(F fn) -> std::invoke_result_t<F, Session&>
	{
		using R = std::invoke_result_t<F, Session&>;
		auto task = std::make_shared<std::packaged_task<R()>>([this, fn = std::move(fn)]() mutable {
			// The snapshot must reflect fn's effects before the caller resumes.
			if constexpr (std::is_void_v<R>) {
				fn(session_);
				refresh_snapshot();
			} else {
				R r = fn(session_);
				refresh_snapshot();
				return r;
			}
		});
		auto result = task->get_future();
		post([task] { (*task)(); });
		return result.get();
	}

	SessionState command(const Command& command);
	// Latest snapshot; safe from any thread without waiting for the mailbox.
	SessionState snapshot() const;

	// Stops the session (back to idle) once sim_time reaches t_ms.
	void stop_at(std::optional<std::int64_t> t_ms);
	// Blocks until the session leaves running mode or the timeout expires.
	bool wait_until_stopped(std::chrono::milliseconds timeout);

	void set_event_sink(EventSink sink);

private:
	void post(std::function<void()> task);
	void loop();
	void run_tasks(std::unique_lock<std::mutex>& lock);
	void publish_snapshot();
	void refresh_snapshot();
	void flush_events(bool force);

	Session& session_;
	bool paced_;
	Pacer pacer_;

	mutable std::mutex mutex_;
	std::condition_variable wake_;
	std::condition_variable idle_;
	std::deque<std::function<void()>> mailbox_;
	bool quit_ = false;
	SessionState snapshot_;
	std::optional<std::int64_t> stop_at_;

	std::mutex sink_mutex_;
	EventSink sink_;
	EventBatch batch_;
	Pacer::Clock::time_point last_flush_ = Pacer::Clock::now();

	std::thread thread_;
};

} // namespace spikeworks::runtime
