#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "spikeworks/runtime/api_server.hpp"

using namespace spikeworks;
using namespace spikeworks::runtime;
using namespace std::chrono_literals;

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

nlohmann::json body_of(const ApiResponse& r) { return nlohmann::json::parse(r.body); }

struct HttpResult {
	unsigned status;
	std::string body;
	std::string cors;
};

HttpResult http_request(std::uint16_t port, http::verb verb, const std::string& target, const std::string& body = "")
{
	asio::io_context ioc;
	tcp::socket socket(ioc);
	socket.connect({asio::ip::make_address("127.0.0.1"), port});
	http::request<http::string_body> req{verb, target, 11};
	req.set(http::field::host, "127.0.0.1");
	req.set(http::field::content_type, "application/json");
	req.body() = body;
	req.prepare_payload();
	http::write(socket, req);
	beast::flat_buffer buffer;
	http::response<http::string_body> res;
	http::read(socket, buffer, res);
	return {res.result_int(), res.body(), std::string(res[http::field::access_control_allow_origin])};
}

} // namespace

TEST_CASE("bind address parsing")
{
	const auto a = parse_bind_address("0.0.0.0:8080");
	CHECK(a.host == "0.0.0.0");
	CHECK(a.port == 8080);
	CHECK(parse_bind_address(":9000").host == "127.0.0.1");
	CHECK(parse_bind_address("9001").port == 9001);
	CHECK_THROWS(parse_bind_address("host:"));
	CHECK_THROWS(parse_bind_address("host:70000"));
	CHECK_THROWS(parse_bind_address("host:12ab"));
}

TEST_CASE("network description")
{
	const auto net = braitenberg::build_epuck_network().network;
	const auto j = network_to_json(net);
	CHECK(j["groups"].size() == 4);
	CHECK(j["synapses"].size() == 20);
	CHECK(j["groups"][0]["name"] == "ctx.ps");
	CHECK(j["groups"][0]["kind"] == "sensory");
	CHECK(j["synapses"][0].contains("delay_ms"));
}

TEST_CASE("control endpoints")
{
	Session session(default_config());
	Runner runner(session, false);
	ApiServer api(runner);

	auto r = api.handle("GET", "/api/state", "");
	CHECK(r.status == 200);
	CHECK(body_of(r)["mode"] == "idle");
	CHECK(body_of(r)["sim_time_ms"] == 0);

	r = api.handle("POST", "/api/control", R"({"cmd":"step","n_ms":1})");
	CHECK(r.status == 200);
	CHECK(body_of(r)["sim_time_ms"] == 1);
	r = api.handle("POST", "/api/control", R"({"cmd":"step","n_ms":9})");
	CHECK(body_of(r)["sim_time_ms"] == 10);

	r = api.handle("POST", "/api/control", R"({"cmd":"pause"})");
	CHECK(r.status == 409);
	CHECK(body_of(r)["state"]["mode"] == "idle");
	CHECK(body_of(r)["state"]["sim_time_ms"] == 10);

	CHECK(api.handle("POST", "/api/control", R"({"cmd":"warp"})").status == 400);
	CHECK(api.handle("POST", "/api/control", "{not json").status == 400);
	CHECK(api.handle("POST", "/api/control", R"({"cmd":"speed","factor":0})").status == 400);
	CHECK(api.handle("GET", "/api/control", "").status == 405);
	CHECK(api.handle("POST", "/api/state", "").status == 405);
	CHECK(api.handle("GET", "/api/nothing", "").status == 404);
	CHECK(api.handle("GET", "/index.html", "").status == 404);
	CHECK(api.handle("OPTIONS", "/api/control", "").status == 204);

	r = api.handle("POST", "/api/control", R"({"cmd":"speed","factor":3})");
	CHECK(body_of(r)["rt_factor"] == 3.0);
}

TEST_CASE("network editing is idle-only")
{
	Session session(default_config());
	Runner runner(session, false);
	ApiServer api(runner);

	auto r = api.handle("POST", "/api/network/groups", R"({"name":"hidden","size":4,"kind":"inter"})");
	CHECK(r.status == 201);
	CHECK(body_of(r)["name"] == "hidden");
	CHECK(api.handle("POST", "/api/network/groups", R"({"name":"hidden","size":4})").status == 400);
	CHECK(api.handle("POST", "/api/network/groups", R"({"name":"x","size":-1})").status == 400);

	r = api.handle("POST", "/api/network/connections", R"({"pre":"ctx.ps[0]","post":"hidden[3]","weight":2.5,"delay_ms":4})");
	CHECK(r.status == 201);
	CHECK(api.handle("POST", "/api/network/connections", R"({"pre":"ctx.ps[0]","post":"hidden[4]","weight":1})").status == 400);
	CHECK(api.handle("POST", "/api/network/connections", R"({"pre":"nowhere[0]","post":"hidden[0]","weight":1})").status == 400);
	CHECK(api.handle("GET", "/api/network/groups", "").status == 405);

	const auto net = body_of(api.handle("GET", "/api/network", ""));
	CHECK(net["groups"].size() == 5);
	CHECK(net["synapses"].size() == 21);
	CHECK(net["synapses"][20]["post"] == "hidden[3]");
	CHECK(net["synapses"][20]["delay_ms"] == 4);

	api.handle("POST", "/api/control", R"({"cmd":"step","n_ms":1})");
	CHECK(api.handle("POST", "/api/network/groups", R"({"name":"more","size":1})").status == 201);
	api.handle("POST", "/api/control", R"({"cmd":"start"})");
	api.handle("POST", "/api/control", R"({"cmd":"pause"})");
	r = api.handle("POST", "/api/network/groups", R"({"name":"late","size":1})");
	CHECK(r.status == 409);
	CHECK(body_of(r)["state"]["mode"] == "paused");
	CHECK(api.handle("POST", "/api/network/connections", R"({"pre":"ctx.ps[0]","post":"more[0]","weight":1})").status == 409);
}

TEST_CASE("static files")
{
	const auto root = std::filesystem::temp_directory_path() / "spikeworks_test_api_static";
	std::filesystem::create_directories(root);
	std::ofstream(root / "index.html") << "<html></html>";
	Session session(default_config());
	Runner runner(session, false);
	ApiOptions options;
	options.static_root = root;
	ApiServer api(runner, options);
	const auto r = api.handle("GET", "/", "");
	CHECK(r.status == 200);
	CHECK(r.content_type == "text/html");
	CHECK(r.body == "<html></html>");
	CHECK(api.handle("GET", "/missing.js", "").status == 404);
	CHECK(api.handle("GET", "/../etc/passwd", "").status == 400);
}

TEST_CASE("http and websocket over loopback")
{
	Session session(default_config());
	Runner runner(session, false);
	ApiServer api(runner);
	const auto port = api.port();
	REQUIRE(port != 0);

	auto r = http_request(port, http::verb::get, "/api/state");
	CHECK(r.status == 200);
	CHECK(r.cors == "*");
	CHECK(nlohmann::json::parse(r.body)["mode"] == "idle");
	CHECK(http_request(port, http::verb::post, "/api/control", R"({"cmd":"pause"})").status == 409);

	asio::io_context ioc;
	websocket::stream<tcp::socket> ws(ioc);
	ws.next_layer().connect({asio::ip::make_address("127.0.0.1"), port});
	ws.handshake("127.0.0.1", "/api/events");
	std::this_thread::sleep_for(200ms);

	r = http_request(port, http::verb::post, "/api/control", R"({"cmd":"step","n_ms":1})");
	CHECK(nlohmann::json::parse(r.body)["sim_time_ms"] == 1);
	r = http_request(port, http::verb::post, "/api/control", R"({"cmd":"step","n_ms":499})");
	CHECK(nlohmann::json::parse(r.body)["sim_time_ms"] == 500);

	// Read frames until a state frame reports t = 500.
	std::vector<std::pair<std::int64_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>>> spike_frames;
	std::size_t pose_frames = 0;
	bool saw_sensors = false;
	ws.next_layer().non_blocking(false);
	while (true) {
		beast::flat_buffer buffer;
		ws.read(buffer);
		const auto j = nlohmann::json::parse(beast::buffers_to_string(buffer.data()));
		const auto type = j.at("type").get<std::string>();
		if (type == "spikes") {
			std::vector<std::pair<std::uint32_t, std::uint32_t>> events;
			for (const auto& e : j["events"])
				events.emplace_back(e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>());
			spike_frames.emplace_back(j["t"].get<std::int64_t>(), std::move(events));
		} else if (type == "pose") {
			++pose_frames;
		} else if (type == "sensors") {
			saw_sensors = true;
			CHECK(j["ps"].size() == 8);
		} else if (type == "state" && j["sim_time_ms"] == 500) {
			break;
		}
	}
	CHECK(pose_frames == 50);
	CHECK(saw_sensors);

	// Every spike in the log appears exactly once, grouped by tick.
	const auto log = runner.call([](Session& s) { return s.spike_log(); });
	std::vector<std::tuple<std::int64_t, std::uint32_t, std::uint32_t>> expected, streamed;
	for (const auto& s : log)
		expected.emplace_back(s.time_ms, s.group.value, s.index);
	std::set<std::int64_t> ticks;
	for (const auto& [t, events] : spike_frames) {
		CHECK(ticks.insert(t).second);
		for (const auto& [g, i] : events)
			streamed.emplace_back(t, g, i);
	}
	CHECK(streamed == expected);
	CHECK_FALSE(expected.empty());

	ws.close(websocket::close_code::normal);
	CHECK(http_request(port, http::verb::get, "/api/events").status == 404);
	api.stop();
	CHECK(api.port() == port);
}
