#include "spikeworks/runtime/runner.hpp"

#include <iostream>

#include "spikeworks/sim/trajectory_csv.hpp"

namespace spikeworks::runtime {

using ojson = nlohmann::ordered_json;

void Pacer::reset(std::int64_t sim_time_ms)
{
	anchor_wall_ = Clock::now();
	anchor_sim_ = sim_time_ms;
}

void Pacer::set_factor(double rt_factor, std::int64_t sim_time_ms)
{
	factor_ = rt_factor;
	reset(sim_time_ms);
}

Pacer::Clock::time_point Pacer::due(std::int64_t sim_time_ms) const
{
	const std::chrono::duration<double, std::milli> wall(static_cast<double>(sim_time_ms - anchor_sim_) / factor_);
	return anchor_wall_ + std::chrono::duration_cast<Clock::duration>(wall);
}

std::vector<std::string> EventBatch::serialize() const
{
	std::vector<std::string> frames;
	std::size_t i = 0;
	while (i < spikes.size()) {
		const auto t = spikes[i].time_ms;
		ojson events = ojson::array();
		for (; i < spikes.size() && spikes[i].time_ms == t; ++i)
			events.push_back({spikes[i].group.value, spikes[i].index});
		frames.push_back(ojson{{"type", "spikes"}, {"t", t}, {"events", std::move(events)}}.dump());
	}
	for (const auto& p : poses)
		frames.push_back(ojson{{"type", "pose"}, {"t", p.t_ms}, {"x", p.pose.x}, {"y", p.pose.y},
		                       {"theta", p.pose.theta}}
		                     .dump());
	if (sensors)
		frames.push_back(ojson{{"type", "sensors"},
		                       {"t", sensors->timestamp_ms},
		                       {"ps", sensors->ps},
		                       {"tof", sensors->tof}}
		                     .dump());
	auto st = to_json(state);
	st["type"] = "state";
	frames.push_back(st.dump());
	return frames;
}

Runner::Runner(Session& session, bool paced)
	: session_(session), paced_(paced), pacer_(session.state().rt_factor), snapshot_(session.state())
{
	batch_.t_from = batch_.t_to = snapshot_.sim_time_ms;
	const auto period = static_cast<std::int64_t>(session_.config().trajectory_period_ms);
	session_.set_tick_observer([this, period](const TickRecord& r) {
		batch_.spikes.insert(batch_.spikes.end(), r.spikes.begin(), r.spikes.end());
		if ((r.t_ms + 1) % period == 0)
			batch_.poses.push_back({r.t_ms + 1, r.pose});
		if (r.sensors)
			batch_.sensors = r.sensors;
	});
	thread_ = std::thread([this] { loop(); });
}

Runner::~Runner()
{
	{
		std::lock_guard lock(mutex_);
		quit_ = true;
	}
	wake_.notify_all();
	thread_.join();
	session_.set_tick_observer(nullptr);
}

void Runner::post(std::function<void()> task)
{
	{
		std::lock_guard lock(mutex_);
		mailbox_.push_back(std::move(task));
	}
	wake_.notify_all();
}

SessionState Runner::command(const Command& c)
{
	return call([c](Session& s) { return s.handle_command(c); });
}

SessionState Runner::snapshot() const
{
	std::lock_guard lock(mutex_);
	return snapshot_;
}

void Runner::stop_at(std::optional<std::int64_t> t_ms)
{
	{
		std::lock_guard lock(mutex_);
		stop_at_ = t_ms;
	}
	wake_.notify_all();
}

bool Runner::wait_until_stopped(std::chrono::milliseconds timeout)
{
	std::unique_lock lock(mutex_);
	return idle_.wait_for(lock, timeout, [this] { return snapshot_.mode != Mode::running; });
}

void Runner::set_event_sink(EventSink sink)
{
	std::lock_guard lock(sink_mutex_);
	sink_ = std::move(sink);
}

void Runner::run_tasks(std::unique_lock<std::mutex>& lock)
{
	while (!mailbox_.empty()) {
		auto task = std::move(mailbox_.front());
		mailbox_.pop_front();
		lock.unlock();
		task();
		lock.lock();
	}
}

void Runner::publish_snapshot()
{
	snapshot_ = session_.state();
	if (snapshot_.mode != Mode::running)
		idle_.notify_all();
}

void Runner::refresh_snapshot()
{
	std::lock_guard lock(mutex_);
	publish_snapshot();
}

void Runner::flush_events(bool force)
{
	const auto now = Pacer::Clock::now();
	const auto state = session_.state();
	const bool changed = state.mode != batch_.state.mode || state.rt_factor != batch_.state.rt_factor;
	if (!force && now - last_flush_ < kBatchInterval)
		return;
	if (batch_.empty() && !changed)
		return;
	last_flush_ = now;
	batch_.t_to = state.sim_time_ms;
	batch_.state = state;
	{
		std::lock_guard lock(sink_mutex_);
		if (sink_)
			sink_(batch_);
	}
	batch_.spikes.clear();
	batch_.poses.clear();
	batch_.sensors.reset();
	batch_.t_from = state.sim_time_ms;
}

void Runner::loop()
{
	std::unique_lock lock(mutex_);
	Mode previous = session_.state().mode;
	while (true) {
		run_tasks(lock);
		if (quit_)
			break;

		auto state = session_.state();
		if (state.rt_factor != pacer_.factor())
			pacer_.set_factor(state.rt_factor, state.sim_time_ms);
		if (state.mode == Mode::running && previous != Mode::running)
			pacer_.reset(state.sim_time_ms);
		previous = state.mode;

		if (state.mode != Mode::running) {
			publish_snapshot();
			lock.unlock();
			flush_events(true);
			lock.lock();
			wake_.wait(lock, [this] { return quit_ || !mailbox_.empty(); });
			continue;
		}

		if (stop_at_ && state.sim_time_ms >= *stop_at_) {
			session_.handle_command({Command::Kind::stop});
			continue;
		}

		if (paced_) {
			const auto due = pacer_.due(state.sim_time_ms);
			if (Pacer::Clock::now() < due) {
				wake_.wait_until(lock, due, [this] { return quit_ || !mailbox_.empty(); });
				continue;
			}
		}

		lock.unlock();
		try {
			session_.tick();
		} catch (const std::exception& e) {
			std::cerr << "simulation stopped: " << e.what() << '\n';
			session_.handle_command({Command::Kind::stop});
		}
		flush_events(false);
		lock.lock();
		publish_snapshot();
	}
	lock.unlock();
	flush_events(true);
}

} // namespace spikeworks::runtime
