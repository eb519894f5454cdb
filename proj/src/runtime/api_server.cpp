#include "spikeworks/runtime/api_server.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace spikeworks::runtime {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using ojson = nlohmann::ordered_json;

ojson network_to_json(const snn::Network& network)
{
	ojson groups = ojson::array();
	for (const auto& g : network.groups())
		groups.push_back({{"id", g.id.value},
		                  {"name", g.name},
		                  {"size", g.size},
		                  {"kind", std::string(snn::to_string(g.kind))},
		                  {"params", {{"a", g.params.a}, {"b", g.params.b}, {"c", g.params.c}, {"d", g.params.d}}},
		                  {"noise", g.noise_sigma}});
	ojson synapses = ojson::array();
	for (std::size_t i = 0; i < network.synapses().size(); ++i) {
		const auto& s = network.synapses()[i];
		synapses.push_back({{"id", i},
		                    {"pre", network.describe(s.pre)},
		                    {"post", network.describe(s.post)},
		                    {"weight", s.weight},
		                    {"delay_ms", s.delay_ms}});
	}
	return {{"groups", std::move(groups)}, {"synapses", std::move(synapses)}};
}

ApiOptions parse_bind_address(std::string_view text)
{
	ApiOptions o;
	std::string_view port_text = text;
	if (const auto colon = text.rfind(':'); colon != std::string_view::npos) {
		if (colon > 0)
			o.host = std::string(text.substr(0, colon));
		port_text = text.substr(colon + 1);
	}
	unsigned value = 0;
	const auto [end, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), value);
	if (ec != std::errc{} || end != port_text.data() + port_text.size() || value > 65535 || port_text.empty())
		throw std::invalid_argument("bad bind address '" + std::string(text) + "'");
	o.port = static_cast<std::uint16_t>(value);
	return o;
}

namespace {

ApiResponse json_response(unsigned status, const ojson& body)
{
	return {status, "application/json", body.dump()};
}

ApiResponse error_response(unsigned status, std::string_view message)
{
	return json_response(status, ojson{{"error", std::string(message)}});
}

std::string mime_type(const std::filesystem::path& p)
{
	const auto ext = p.extension().string();
	if (ext == ".html")
		return "text/html";
	if (ext == ".js")
		return "text/javascript";
	if (ext == ".css")
		return "text/css";
	if (ext == ".json")
		return "application/json";
	if (ext == ".svg")
		return "image/svg+xml";
	return "application/octet-stream";
}

class WsSession;

} // namespace

struct ApiServer::Impl {
	Runner& runner;
	ApiOptions options;
	asio::io_context ioc;
	tcp::acceptor acceptor{ioc};
	std::set<std::shared_ptr<WsSession>> sockets;
	std::thread thread;
	bool stopped = false;
	std::uint16_t bound_port = 0;

	Impl(Runner& r, ApiOptions o) : runner(r), options(std::move(o)) {}

	ApiResponse handle(std::string_view method, std::string_view target, std::string_view body);
	ApiResponse serve_static(std::string_view target);
	void accept();
	void broadcast(std::vector<std::string> frames);
};

namespace {

class WsSession : public std::enable_shared_from_this<WsSession> {
public:
	WsSession(tcp::socket socket, ApiServer::Impl& server) : ws_(std::move(socket)), server_(server) {}

	void run(http::request<http::string_body> request)
	{
		ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
		ws_.async_accept(request, [self = shared_from_this()](beast::error_code ec) {
			if (ec)
				return;
			self->server_.sockets.insert(self);
			self->read();
		});
	}

	void send(std::shared_ptr<const std::string> frame)
	{
		queue_.push_back(std::move(frame));
		if (queue_.size() == 1)
			write();
	}

	void close()
	{
		beast::error_code ec;
		beast::get_lowest_layer(ws_).socket().close(ec);
	}

private:
	void read()
	{
		ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
			if (ec) {
				self->server_.sockets.erase(self);
				return;
			}
			self->buffer_.consume(self->buffer_.size());
			self->read();
		});
	}

	void write()
	{
		ws_.text(true);
		ws_.async_write(asio::buffer(*queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
			if (ec) {
				self->server_.sockets.erase(self);
				return;
			}
			self->queue_.pop_front();
			if (!self->queue_.empty())
				self->write();
		});
	}

	websocket::stream<beast::tcp_stream> ws_;
	ApiServer::Impl& server_;
	beast::flat_buffer buffer_;
	std::deque<std::shared_ptr<const std::string>> queue_;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
	HttpSession(tcp::socket socket, ApiServer::Impl& server) : stream_(std::move(socket)), server_(server) {}

	void run() { read(); }

private:
	void read()
	{
		request_ = {};
		stream_.expires_after(std::chrono::seconds(30));
		http::async_read(stream_, buffer_, request_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
			if (ec)
				return;
			self->on_request();
		});
	}

	void on_request()
	{
		if (websocket::is_upgrade(request_)) {
			if (request_.target() == "/api/events") {
				stream_.expires_never();
				std::make_shared<WsSession>(stream_.release_socket(), server_)->run(std::move(request_));
				return;
			}
			respond(error_response(404, "no websocket endpoint here"));
			return;
		}
		const auto method = std::string(request_.method_string());
		const auto target = std::string(request_.target());
		respond(server_.handle(method, target, request_.body()));
	}

	void respond(ApiResponse r)
	{
		auto res = std::make_shared<http::response<http::string_body>>(static_cast<http::status>(r.status),
		                                                                request_.version());
		res->set(http::field::server, "spikeworks");
		res->set(http::field::content_type, r.content_type);
		res->set(http::field::access_control_allow_origin, "*");
		res->keep_alive(request_.keep_alive());
		res->body() = std::move(r.body);
		res->prepare_payload();
		http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
			if (ec)
				return;
			if (!res->keep_alive()) {
				beast::error_code ignored;
				self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
				return;
			}
			self->read();
		});
	}

	beast::tcp_stream stream_;
	ApiServer::Impl& server_;
	beast::flat_buffer buffer_;
	http::request<http::string_body> request_;
};

} // namespace

ApiResponse ApiServer::Impl::handle(std::string_view method, std::string_view target, std::string_view body)
{
	const auto query = target.find('?');
	const auto path = target.substr(0, query);
	const bool get = method == "GET";
	const bool post = method == "POST";

	if (method == "OPTIONS")
		return {204, "text/plain", ""};

	try {
		if (path == "/api/state") {
			if (!get)
				return error_response(405, "use GET");
			return json_response(200, to_json(runner.call([](Session& s) { return s.state(); })));
		}
		if (path == "/api/network") {
			if (!get)
				return error_response(405, "use GET");
			return json_response(200, runner.call([](Session& s) { return network_to_json(s.network()); }));
		}
		if (path == "/api/control") {
			if (!post)
				return error_response(405, "use POST");
			const auto command = Command::parse(nlohmann::json::parse(body));
			return json_response(200, to_json(runner.command(command)));
		}
		if (path == "/api/network/groups") {
			if (!post)
				return error_response(405, "use POST");
			const auto group = parse_group_config(nlohmann::json::parse(body));
			const auto id = runner.call([&group](Session& s) { return s.add_group(group); });
			return json_response(201, ojson{{"id", id.value}, {"name", group.name}});
		}
		if (path == "/api/network/connections") {
			if (!post)
				return error_response(405, "use POST");
			const auto conn = parse_connection_config(nlohmann::json::parse(body));
			const auto id = runner.call([&conn](Session& s) { return s.add_connection(conn); });
			return json_response(201, ojson{{"id", id.value}, {"pre", conn.pre}, {"post", conn.post}});
		}
	} catch (const IllegalTransition& e) {
		auto j = ojson{{"error", e.what()}, {"state", to_json(runner.snapshot())}};
		return json_response(409, j);
	} catch (const nlohmann::json::exception& e) {
		return error_response(400, e.what());
	} catch (const std::invalid_argument& e) {
		return error_response(400, e.what());
	} catch (const ConfigError& e) {
		return error_response(400, e.what());
	} catch (const std::out_of_range& e) {
		return error_response(400, e.what());
	}

	if (get && options.static_root && !path.starts_with("/api/"))
		return serve_static(path);
	return error_response(404, "not found");
}

ApiResponse ApiServer::Impl::serve_static(std::string_view target)
{
	std::string rel(target == "/" ? "/index.html" : target);
	if (rel.find("..") != std::string::npos)
		return error_response(400, "bad path");
	const auto file = *options.static_root / rel.substr(1);
	std::ifstream in(file, std::ios::binary);
	if (!in)
		return error_response(404, "not found");
	std::ostringstream data;
	data << in.rdbuf();
	return {200, mime_type(file), data.str()};
}

void ApiServer::Impl::accept()
{
	acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
		if (ec)
			return;
		std::make_shared<HttpSession>(std::move(socket), *this)->run();
		accept();
	});
}

void ApiServer::Impl::broadcast(std::vector<std::string> frames)
{
	asio::post(ioc, [this, frames = std::move(frames)] {
		for (const auto& f : frames) {
			auto shared = std::make_shared<const std::string>(f);
			for (const auto& s : sockets)
				s->send(shared);
		}
	});
}

ApiServer::ApiServer(Runner& runner, ApiOptions options) : impl_(std::make_unique<Impl>(runner, std::move(options)))
{
	const auto address = asio::ip::make_address(impl_->options.host);
	const tcp::endpoint endpoint(address, impl_->options.port);
	impl_->acceptor.open(endpoint.protocol());
	impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
	impl_->acceptor.bind(endpoint);
	impl_->acceptor.listen();
	impl_->bound_port = impl_->acceptor.local_endpoint().port();
	impl_->accept();
	runner.set_event_sink([impl = impl_.get()](const EventBatch& batch) { impl->broadcast(batch.serialize()); });
	impl_->thread = std::thread([impl = impl_.get()] { impl->ioc.run(); });
}

ApiServer::~ApiServer() { stop(); }

std::uint16_t ApiServer::port() const { return impl_->bound_port; }

void ApiServer::stop()
{
	if (impl_->stopped)
		return;
	impl_->stopped = true;
	impl_->runner.set_event_sink(nullptr);
	asio::post(impl_->ioc, [impl = impl_.get()] {
		beast::error_code ec;
		impl->acceptor.close(ec);
		for (const auto& s : impl->sockets)
			s->close();
		impl->sockets.clear();
	});
	impl_->ioc.stop();
	impl_->thread.join();
}

ApiResponse ApiServer::handle(std::string_view method, std::string_view target, std::string_view body)
{
	return impl_->handle(method, target, body);
}

} // namespace spikeworks::runtime
