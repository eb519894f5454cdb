#include "spikeworks/iobus/name_server.hpp"

#include <stdexcept>

#include "spikeworks/iobus/framing.hpp"

namespace spikeworks::iobus {

namespace {

using ojson = nlohmann::ordered_json;

ojson endpoint_json(const Endpoint& e)
{
	ojson j;
	j["port"] = e.name.str();
	j["direction"] = std::string(to_string(e.direction));
	if (const auto* tcp = std::get_if<TcpAddress>(&e.location))
		j["address"] = tcp->str();
	return j;
}

ojson failure(const std::string& message)
{
	ojson j;
	j["ok"] = false;
	j["error"] = message;
	return j;
}

} // namespace

NameServer::NameServer(std::uint16_t port, const std::string& host)
{
	server_ = std::make_unique<FrameServer>(host, port, [this](const std::string& body) {
		nlohmann::json request;
		try {
			request = nlohmann::json::parse(body);
		} catch (const nlohmann::json::parse_error&) {
			return std::optional<std::string>(failure("malformed request").dump());
		}
		return std::optional<std::string>(handle(request).dump());
	});
}

ojson NameServer::handle(const nlohmann::json& request)
{
	try {
		if (!request.is_object() || !request.contains("op"))
			return failure("request needs an op");
		const auto op = request.at("op").get<std::string>();
		std::lock_guard lock(mutex_);
		ojson reply;
		reply["ok"] = true;

		if (op == "register") {
			const PortName name(request.at("port").get<std::string>());
			const auto direction = parse_direction(request.at("direction").get<std::string>());
			Location location = InProcess{};
			if (request.contains("address"))
				location = TcpAddress::parse(request.at("address").get<std::string>());
			registry_.add(name, direction, location);
		} else if (op == "unregister") {
			if (!registry_.remove(PortName(request.at("port").get<std::string>())))
				return failure("unknown port");
		} else if (op == "resolve") {
			const auto e = registry_.resolve(PortName(request.at("port").get<std::string>()));
			if (!e)
				return failure("unknown port");
			const auto ej = endpoint_json(*e);
			for (auto it = ej.begin(); it != ej.end(); ++it)
				reply[it.key()] = it.value();
		} else if (op == "connect") {
			const auto c = registry_.connect(PortName(request.at("source").get<std::string>()),
			                                 PortName(request.at("sink").get<std::string>()));
			reply["id"] = c.id.value;
		} else if (op == "list") {
			auto& ports = reply["ports"] = ojson::array();
			for (const auto& e : registry_.endpoints())
				ports.push_back(endpoint_json(e));
			auto& conns = reply["connections"] = ojson::array();
			for (const auto& c : registry_.connections())
				conns.push_back({{"id", c.id.value}, {"source", c.source.str()}, {"sink", c.sink.str()}});
		} else {
			return failure("unknown op '" + op + "'");
		}
		return reply;
	} catch (const std::exception& e) {
		return failure(e.what());
	}
}

NameClient::NameClient(const TcpAddress& server) : client_(server) {}

nlohmann::json NameClient::request(const nlohmann::ordered_json& body)
{
	const auto reply = nlohmann::json::parse(client_.request(body.dump()));
	if (!reply.value("ok", false))
		throw std::runtime_error("name server: " + reply.value("error", std::string("request failed")));
	return reply;
}

void NameClient::register_port(const PortName& name, Direction direction,
                               const std::optional<TcpAddress>& address)
{
	ojson body;
	body["op"] = "register";
	body["port"] = name.str();
	body["direction"] = std::string(to_string(direction));
	if (address)
		body["address"] = address->str();
	request(body);
}

bool NameClient::unregister_port(const PortName& name)
{
	try {
		request(ojson{{"op", "unregister"}, {"port", name.str()}});
		return true;
	} catch (const std::runtime_error&) {
		return false;
	}
}

std::optional<Endpoint> NameClient::resolve(const PortName& name)
{
	const auto reply = nlohmann::json::parse(client_.request(ojson{{"op", "resolve"}, {"port", name.str()}}.dump()));
	if (!reply.value("ok", false))
		return std::nullopt;
	Location location = InProcess{};
	if (reply.contains("address"))
		location = TcpAddress::parse(reply.at("address").get<std::string>());
	return Endpoint{name, parse_direction(reply.at("direction").get<std::string>()), location};
}

ConnectionId NameClient::connect(const PortName& source, const PortName& sink)
{
	const auto reply = request(ojson{{"op", "connect"}, {"source", source.str()}, {"sink", sink.str()}});
	return ConnectionId{reply.at("id").get<std::uint64_t>()};
}

} // namespace spikeworks::iobus
