#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "spikeworks/iobus/framing.hpp"
#include "spikeworks/iobus/registry.hpp"

namespace spikeworks::iobus {

constexpr std::size_t kDefaultQueueCapacity = 1024;

// Mutex-guarded FIFO with a fixed capacity. When full, the oldest entry is
// discarded and the overflow counter incremented.
template <typename T>
class BoundedQueue {
public:
	explicit BoundedQueue(std::size_t capacity = kDefaultQueueCapacity) : capacity_(capacity == 0 ? 1 : capacity) {}

	void push(T value)
	{
		{
			std::lock_guard lock(mutex_);
			if (items_.size() == capacity_) {
				items_.pop_front();
				++overflow_;
			}
			items_.push_back(std::move(value));
		}
		ready_.notify_all();
	}

	std::vector<T> pop(std::size_t max)
	{
		std::lock_guard lock(mutex_);
		return take(max);
	}

	// Blocks until at least `min_count` items are queued or the timeout
	// expires; returns whether the count was reached.
	bool wait_for(std::size_t min_count, std::chrono::milliseconds timeout)
	{
		std::unique_lock lock(mutex_);
		return ready_.wait_for(lock, timeout, [&] { return items_.size() >= min_count; });
	}

	std::size_t size() const
	{
		std::lock_guard lock(mutex_);
		return items_.size();
	}

	std::size_t capacity() const { return capacity_; }

	std::uint64_t overflow_count() const
	{
		std::lock_guard lock(mutex_);
		return overflow_;
	}

private:
	std::vector<T> take(std::size_t max)
	{
		std::vector<T> out;
		const auto n = std::min(max, items_.size());
		out.reserve(n);
		for (std::size_t i = 0; i < n; ++i) {
			out.push_back(std::move(items_.front()));
			items_.pop_front();
		}
		return out;
	}

	std::size_t capacity_;
	mutable std::mutex mutex_;
	std::condition_variable ready_;
	std::deque<T> items_;
	std::uint64_t overflow_ = 0;
};

namespace detail {
struct PortCore;
}

// Handle to a registered port. Cheap to copy; one thread should use a given
// handle at a time.
class PortHandle {
public:
	PortHandle() = default;

	const PortName& name() const;
	Direction direction() const;
	bool valid() const;

	// Output ports only. The payload length is fixed by the first publish;
	// later publishes with another length throw std::invalid_argument.
	void publish(std::int64_t timestamp_ms, std::vector<double> payload);

	// Input ports only. Up to `max` messages in arrival order.
	std::vector<PortMessage> poll(std::size_t max = SIZE_MAX);
	bool wait_for(std::size_t min_count, std::chrono::milliseconds timeout);
	std::size_t pending() const;
	std::uint64_t overflow_count() const;

private:
	friend class Bus;
	explicit PortHandle(std::shared_ptr<detail::PortCore> core) : core_(std::move(core)) {}
	std::shared_ptr<detail::PortCore> core_;
};

class FrameServer;

// In-process message bus with a name registry. Connections to sinks that are
// exposed over TCP (here or in another process) are carried as framed
// messages over loopback sockets; everything else is a direct enqueue.
class Bus {
public:
	Bus();
	~Bus();

	Bus(const Bus&) = delete;
	Bus& operator=(const Bus&) = delete;

	PortHandle register_port(const PortName& name, Direction direction,
	                         std::size_t capacity = kDefaultQueueCapacity);
	PortHandle register_port(std::string_view name, Direction direction,
	                         std::size_t capacity = kDefaultQueueCapacity);

	// Registers an input living elsewhere, reachable at `address`.
	void register_remote_input(const PortName& name, const TcpAddress& address);

	// Makes a local input reachable over TCP and routes later connections to
	// it through a socket. Returns the bound address.
	TcpAddress expose_tcp(const PortName& name, const std::string& host = "127.0.0.1",
	                      std::uint16_t port = 0);

	bool unregister_port(const PortName& name);
	std::optional<Endpoint> resolve(const PortName& name) const;

	ConnectionId connect_ports(const PortName& source, const PortName& sink);
	ConnectionId connect_ports(std::string_view source, std::string_view sink);
	bool disconnect(ConnectionId id);

	std::vector<Connection> connections() const;

private:
	mutable std::mutex mutex_;
	Registry registry_;
	std::map<PortName, std::shared_ptr<detail::PortCore>> cores_;
	std::map<PortName, std::unique_ptr<FrameServer>> tcp_sinks_;
};

} // namespace spikeworks::iobus
