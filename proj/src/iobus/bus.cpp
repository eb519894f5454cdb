#include "spikeworks/iobus/bus.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "spikeworks/iobus/tcp_link.hpp"

namespace spikeworks::iobus {

namespace {

class Link {
public:
	virtual ~Link() = default;
	virtual void deliver(const PortMessage& message) = 0;
};

} // namespace

namespace detail {

struct PortCore {
	PortCore(PortName n, Direction d, std::size_t capacity) : name(std::move(n)), direction(d), inbox(capacity) {}

	PortName name;
	Direction direction;
	std::atomic<bool> open{true};

	BoundedQueue<PortMessage> inbox;

	std::mutex out_mutex;
	std::optional<std::size_t> payload_size;
	std::vector<std::pair<ConnectionId, std::shared_ptr<Link>>> links;
};

} // namespace detail

namespace {

class InProcessLink final : public Link {
public:
	explicit InProcessLink(std::shared_ptr<detail::PortCore> sink) : sink_(std::move(sink)) {}
	void deliver(const PortMessage& message) override { sink_->inbox.push(message); }

private:
	std::shared_ptr<detail::PortCore> sink_;
};

class TcpLink final : public Link {
public:
	explicit TcpLink(const TcpAddress& address) : client_(address) {}
	void deliver(const PortMessage& message) override
	{
		const auto bytes = frame_tcp(message);
		std::lock_guard lock(mutex_);
		client_.send(bytes);
	}

private:
	std::mutex mutex_;
	FrameClient client_;
};

} // namespace

const PortName& PortHandle::name() const
{
	if (!core_)
		throw std::logic_error("empty port handle");
	return core_->name;
}

Direction PortHandle::direction() const
{
	if (!core_)
		throw std::logic_error("empty port handle");
	return core_->direction;
}

bool PortHandle::valid() const { return core_ && core_->open.load(); }

void PortHandle::publish(std::int64_t timestamp_ms, std::vector<double> payload)
{
	if (!valid())
		throw std::logic_error("publish on a closed port");
	if (core_->direction != Direction::output)
		throw std::logic_error("publish on input port '" + core_->name.str() + "'");

	std::lock_guard lock(core_->out_mutex);
	if (core_->payload_size && *core_->payload_size != payload.size())
		throw std::invalid_argument("payload length of '" + core_->name.str() + "' changed from " +
		                            std::to_string(*core_->payload_size) + " to " +
		                            std::to_string(payload.size()));
	core_->payload_size = payload.size();

	const PortMessage message{timestamp_ms, core_->name.str(), std::move(payload)};
	for (const auto& [_, link] : core_->links)
		link->deliver(message);
}

std::vector<PortMessage> PortHandle::poll(std::size_t max)
{
	if (!core_)
		throw std::logic_error("empty port handle");
	if (core_->direction != Direction::input)
		throw std::logic_error("poll on output port '" + core_->name.str() + "'");
	return core_->inbox.pop(max);
}

bool PortHandle::wait_for(std::size_t min_count, std::chrono::milliseconds timeout)
{
	if (!core_ || core_->direction != Direction::input)
		throw std::logic_error("wait_for needs an input port");
	return core_->inbox.wait_for(min_count, timeout);
}

std::size_t PortHandle::pending() const { return core_ ? core_->inbox.size() : 0; }

std::uint64_t PortHandle::overflow_count() const { return core_ ? core_->inbox.overflow_count() : 0; }

Bus::Bus() = default;

Bus::~Bus()
{
	std::lock_guard lock(mutex_);
	for (auto& [_, server] : tcp_sinks_)
		server->stop();
	for (auto& [_, core] : cores_) {
		std::lock_guard out(core->out_mutex);
		core->links.clear();
	}
}

PortHandle Bus::register_port(const PortName& name, Direction direction, std::size_t capacity)
{
	std::lock_guard lock(mutex_);
	registry_.add(name, direction);
	auto core = std::make_shared<detail::PortCore>(name, direction, capacity);
	cores_.emplace(name, core);
	return PortHandle(std::move(core));
}

PortHandle Bus::register_port(std::string_view name, Direction direction, std::size_t capacity)
{
	return register_port(PortName(std::string(name)), direction, capacity);
}

void Bus::register_remote_input(const PortName& name, const TcpAddress& address)
{
	std::lock_guard lock(mutex_);
	registry_.add(name, Direction::input, address);
}

TcpAddress Bus::expose_tcp(const PortName& name, const std::string& host, std::uint16_t port)
{
	std::lock_guard lock(mutex_);
	const auto it = cores_.find(name);
	if (it == cores_.end() || it->second->direction != Direction::input)
		throw std::invalid_argument("only local input ports can be exposed over tcp");
	if (tcp_sinks_.contains(name))
		throw std::invalid_argument("port '" + name.str() + "' is already exposed");

	std::weak_ptr<detail::PortCore> sink = it->second;
	auto server = std::make_unique<FrameServer>(host, port, [sink](const std::string& body) {
		auto message = message_from_json_text(body);
		if (auto core = sink.lock())
			core->inbox.push(std::move(message));
		return std::optional<std::string>{};
	});
	const auto address = server->address();
	registry_.relocate(name, address);
	tcp_sinks_.emplace(name, std::move(server));
	return address;
}

bool Bus::unregister_port(const PortName& name)
{
	std::lock_guard lock(mutex_);
	const auto doomed = [&] {
		std::vector<ConnectionId> ids;
		for (const auto& c : registry_.connections())
			if (c.source == name || c.sink == name)
				ids.push_back(c.id);
		return ids;
	}();
	if (!registry_.remove(name))
		return false;

	for (auto& [_, core] : cores_) {
		std::lock_guard out(core->out_mutex);
		std::erase_if(core->links, [&](const auto& l) {
			return std::find(doomed.begin(), doomed.end(), l.first) != doomed.end();
		});
	}
	if (const auto it = tcp_sinks_.find(name); it != tcp_sinks_.end()) {
		it->second->stop();
		tcp_sinks_.erase(it);
	}
	if (const auto it = cores_.find(name); it != cores_.end()) {
		it->second->open = false;
		cores_.erase(it);
	}
	return true;
}

std::optional<Endpoint> Bus::resolve(const PortName& name) const
{
	std::lock_guard lock(mutex_);
	return registry_.resolve(name);
}

ConnectionId Bus::connect_ports(const PortName& source, const PortName& sink)
{
	std::lock_guard lock(mutex_);
	const auto src_core = cores_.find(source);
	if (registry_.contains(source) && src_core == cores_.end())
		throw std::invalid_argument("source '" + source.str() + "' is not a local port");

	const auto connection = registry_.connect(source, sink);
	std::shared_ptr<Link> link;
	try {
		const auto endpoint = *registry_.resolve(sink);
		if (const auto* tcp = std::get_if<TcpAddress>(&endpoint.location))
			link = std::make_shared<TcpLink>(*tcp);
		else
			link = std::make_shared<InProcessLink>(cores_.at(sink));
	} catch (...) {
		registry_.disconnect(connection.id);
		throw;
	}

	std::lock_guard out(src_core->second->out_mutex);
	src_core->second->links.emplace_back(connection.id, std::move(link));
	return connection.id;
}

ConnectionId Bus::connect_ports(std::string_view source, std::string_view sink)
{
	return connect_ports(PortName(std::string(source)), PortName(std::string(sink)));
}

bool Bus::disconnect(ConnectionId id)
{
	std::lock_guard lock(mutex_);
	if (!registry_.disconnect(id))
		return false;
	for (auto& [_, core] : cores_) {
		std::lock_guard out(core->out_mutex);
		std::erase_if(core->links, [&](const auto& l) { return l.first == id; });
	}
	return true;
}

std::vector<Connection> Bus::connections() const
{
	std::lock_guard lock(mutex_);
	return registry_.connections();
}

} // namespace spikeworks::iobus
