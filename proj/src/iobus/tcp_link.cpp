#include "spikeworks/iobus/tcp_link.hpp"

#include <array>
#include <atomic>
#include <thread>
#include <vector>

#include <boost/asio.hpp>

#include "spikeworks/iobus/framing.hpp"

namespace spikeworks::iobus {

namespace asio = boost::asio;
using asio::ip::tcp;

namespace {

class FrameSession : public std::enable_shared_from_this<FrameSession> {
public:
	FrameSession(tcp::socket socket, const FrameServer::Handler& handler, std::atomic<std::uint64_t>& errors)
		: socket_(std::move(socket)), handler_(handler), errors_(errors)
	{}

	void start() { read_header(); }

private:
	void read_header()
	{
		auto self = shared_from_this();
		asio::async_read(socket_, asio::buffer(header_), [self](boost::system::error_code ec, std::size_t) {
			if (ec)
				return;
			const auto n = read_length_prefix(std::span<const std::uint8_t, 4>(self->header_));
			if (n > kMaxFrameBytes) {
				++self->errors_;
				return;
			}
			self->body_.resize(n);
			self->read_body();
		});
	}

	void read_body()
	{
		auto self = shared_from_this();
		asio::async_read(socket_, asio::buffer(body_), [self](boost::system::error_code ec, std::size_t) {
			if (ec)
				return;
			std::optional<std::string> reply;
			try {
				reply = self->handler_(std::string(self->body_.begin(), self->body_.end()));
			} catch (const std::exception&) {
				++self->errors_;
				return;
			}
			if (!reply) {
				self->read_header();
				return;
			}
			self->reply_ = frame_text(*reply);
			asio::async_write(self->socket_, asio::buffer(self->reply_),
			                  [self](boost::system::error_code wec, std::size_t) {
				                  if (!wec)
					                  self->read_header();
			                  });
		});
	}

	tcp::socket socket_;
	const FrameServer::Handler& handler_;
	std::atomic<std::uint64_t>& errors_;
	std::array<std::uint8_t, 4> header_{};
	std::vector<std::uint8_t> body_;
	std::vector<std::uint8_t> reply_;
};

} // namespace

struct FrameServer::Impl {
	asio::io_context io;
	tcp::acceptor acceptor{io};
	Handler handler;
	std::atomic<std::uint64_t> errors{0};
	std::thread thread;
	std::string host;

	void accept()
	{
		acceptor.async_accept([this](boost::system::error_code ec, tcp::socket socket) {
			if (ec)
				return;
			socket.set_option(tcp::no_delay(true));
			std::make_shared<FrameSession>(std::move(socket), handler, errors)->start();
			accept();
		});
	}
};

FrameServer::FrameServer(const std::string& host, std::uint16_t port, Handler handler)
	: impl_(std::make_unique<Impl>())
{
	impl_->handler = std::move(handler);
	impl_->host = host;
	const tcp::endpoint ep(asio::ip::make_address(host), port);
	impl_->acceptor.open(ep.protocol());
	impl_->acceptor.set_option(tcp::acceptor::reuse_address(true));
	impl_->acceptor.bind(ep);
	impl_->acceptor.listen();
	impl_->accept();
	impl_->thread = std::thread([impl = impl_.get()] { impl->io.run(); });
}

FrameServer::~FrameServer() { stop(); }

void FrameServer::stop()
{
	if (!impl_ || !impl_->thread.joinable())
		return;
	impl_->io.stop();
	impl_->thread.join();
}

TcpAddress FrameServer::address() const
{
	return {impl_->host, impl_->acceptor.local_endpoint().port()};
}

std::uint64_t FrameServer::protocol_errors() const { return impl_->errors.load(); }

struct FrameClient::Impl {
	asio::io_context io;
	tcp::socket socket{io};
};

FrameClient::FrameClient(const TcpAddress& address) : impl_(std::make_unique<Impl>())
{
	tcp::resolver resolver(impl_->io);
	asio::connect(impl_->socket, resolver.resolve(address.host, std::to_string(address.port)));
	impl_->socket.set_option(tcp::no_delay(true));
}

FrameClient::~FrameClient()
{
	boost::system::error_code ignored;
	impl_->socket.shutdown(tcp::socket::shutdown_both, ignored);
	impl_->socket.close(ignored);
}

void FrameClient::send(std::span<const std::uint8_t> frame)
{
	asio::write(impl_->socket, asio::buffer(frame.data(), frame.size()));
}

std::string FrameClient::receive()
{
	std::array<std::uint8_t, 4> header{};
	asio::read(impl_->socket, asio::buffer(header));
	const auto n = read_length_prefix(std::span<const std::uint8_t, 4>(header));
	if (n > kMaxFrameBytes)
		throw FrameError("frame body too large");
	std::string body(n, '\0');
	asio::read(impl_->socket, asio::buffer(body.data(), body.size()));
	return body;
}

std::string FrameClient::request(std::string_view body)
{
	send(frame_text(body));
	return receive();
}

} // namespace spikeworks::iobus
