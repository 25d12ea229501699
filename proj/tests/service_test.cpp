#include <gtest/gtest.h>

#include <boost/asio.hpp>
#include <boost/beast.hpp>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "insq/error.hpp"
#include "insq/io/scenario_io.hpp"
#include "insq/service/server.hpp"
#include "insq/sim/oracle.hpp"
#include "insq/sim/simulation.hpp"
#include "support/scenarios.hpp"

namespace {

using namespace insq;
using namespace insq::service;
using nlohmann::json;
namespace ref = insq::testing;
namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

json cmd(const std::string& name) { return {{"cmd", name}}; }

// Collects published messages for one subscription.
struct Recorder {
  std::mutex mutex;
  std::vector<json> messages;

  Sink sink() {
    return [this](const std::string& text) {
      std::lock_guard lock(mutex);
      messages.push_back(json::parse(text));
    };
  }
  std::vector<json> ticks() {
    std::lock_guard lock(mutex);
    std::vector<json> out;
    for (const json& m : messages) {
      if (!m.contains("type")) out.push_back(m);
    }
    return out;
  }
  bool completed() {
    std::lock_guard lock(mutex);
    return !messages.empty() && messages.back().value("type", "") == "complete";
  }
};

void run_to_end(SessionManager& m, const std::string& id) {
  const ControlResult r = m.control(id, cmd("start"));
  ASSERT_TRUE(r.started_generation);
  while (m.pump(id, *r.started_generation)) {
  }
}

std::vector<json> batch_json(const sim::Scenario& s) {
  std::vector<json> out;
  for (const sim::TickReport& r : sim::run_simulation(s).reports) out.push_back(io::report_to_json(r));
  return out;
}

Error error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected an error";
  return Error(ErrorCode::kInvalidArgument, "none");
}

TEST(SessionManager, CreateDistinctWithDefaultScenario) {
  SessionManager m;
  const std::string a = m.create();
  const std::string b = m.create();
  EXPECT_NE(a, b);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.get_scenario(a), io::save_scenario(sim::default_scenario(sim::Mode::kPlane)));
  EXPECT_EQ(m.status(a), RunStatus::kIdle);
  EXPECT_EQ(error_of([&] { m.get_scenario("nope"); }).code(), ErrorCode::kNotFound);
}

TEST(SessionManager, ConcurrentCreates) {
  SessionManager m;
  std::mutex mutex;
  std::set<std::string> ids;
  std::vector<std::thread> threads;
  for (int i = 0; i < 100; ++i) {
    threads.emplace_back([&] {
      const std::string id = m.create();
      m.put_scenario(id, io::save_scenario(ref::two_site_scenario()));
      std::lock_guard lock(mutex);
      ids.insert(id);
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ids.size(), 100u);
  EXPECT_EQ(m.size(), 100u);
  m.edit(*ids.begin(), {{"op", "add_site"}, {"x", 5.0}, {"y", 3.0}});
  for (auto it = std::next(ids.begin()); it != ids.end(); ++it) {
    EXPECT_EQ(m.get_scenario(*it), io::save_scenario(ref::two_site_scenario()));
  }
}

TEST(SessionManager, PutGetRoundTrip) {
  SessionManager m;
  const std::string id = m.create();
  const sim::Scenario s = ref::grid_network_scenario(5, 5, 6, 2, 1.0, 3, 50);
  m.put_scenario(id, io::save_scenario(s));
  EXPECT_EQ(io::load_scenario(m.get_scenario(id)), s);
  json broken = json::parse(io::save_scenario(s));
  broken.erase("rho");
  const Error e = error_of([&] { m.put_scenario(id, broken.dump()); });
  EXPECT_EQ(e.code(), ErrorCode::kSchema);
  EXPECT_EQ(e.field(), "rho");
  EXPECT_EQ(io::load_scenario(m.get_scenario(id)), s);
}

TEST(SessionManager, PutWhileRunningResets) {
  SessionManager m;
  const std::string id = m.create();
  m.put_scenario(id, io::save_scenario(ref::two_site_scenario()));
  const auto gen = m.control(id, cmd("start")).started_generation;
  ASSERT_TRUE(gen);
  EXPECT_TRUE(m.pump(id, *gen));
  EXPECT_TRUE(m.pump(id, *gen));
  m.put_scenario(id, io::save_scenario(ref::two_site_scenario()));
  EXPECT_EQ(m.status(id), RunStatus::kIdle);
  EXPECT_FALSE(m.pump(id, *gen));
  const ControlResult r = m.control(id, cmd("step"));
  EXPECT_EQ((*r.tick)["t"], 0);
}

TEST(SessionManager, StartPauseStepStep) {
  SessionManager m;
  const std::string id = m.create();
  m.put_scenario(id, io::save_scenario(ref::random_plane_scenario(50, 3, 1.6, 2, 100)));
  const auto gen = *m.control(id, cmd("start")).started_generation;
  for (int i = 0; i < 5; ++i) EXPECT_TRUE(m.pump(id, gen));
  EXPECT_EQ(error_of([&] { m.control(id, cmd("step")); }).code(), ErrorCode::kConflict);
  EXPECT_EQ(m.control(id, cmd("pause")).status, RunStatus::kPaused);
  EXPECT_FALSE(m.pump(id, gen));
  const ControlResult a = m.control(id, cmd("step"));
  const ControlResult b = m.control(id, cmd("step"));
  EXPECT_EQ((*a.tick)["t"], 5);
  EXPECT_EQ((*b.tick)["t"], 6);
  EXPECT_EQ(b.status, RunStatus::kPaused);
  const auto again = m.control(id, cmd("start")).started_generation;
  ASSERT_TRUE(again);
  EXPECT_NE(*again, gen);
}

TEST(SessionManager, SetSpeedChangesStepFromNextTick) {
  SessionManager m;
  const std::string id = m.create();
  sim::Scenario s;
  s.k = 1;
  s.rho = 1.0;
  s.sites = {{0, {0, 0}}, {1, {100, 0}}};
  s.path = {{0, 0}, {100, 0}};
  m.put_scenario(id, io::save_scenario(s));
  Recorder rec;
  m.subscribe(id, false, rec.sink());
  const auto gen = *m.control(id, cmd("start")).started_generation;
  m.pump(id, gen);
  m.pump(id, gen);
  m.control(id, {{"cmd", "set_speed"}, {"speed", 4.0}});
  m.pump(id, gen);
  m.pump(id, gen);
  const auto ticks = rec.ticks();
  ASSERT_EQ(ticks.size(), 4u);
  EXPECT_EQ(ticks[1]["pos"][0].get<double>() - ticks[0]["pos"][0].get<double>(), 1.0);
  EXPECT_EQ(ticks[2]["pos"][0].get<double>() - ticks[1]["pos"][0].get<double>(), 4.0);
  EXPECT_EQ(ticks[3]["pos"][0].get<double>() - ticks[2]["pos"][0].get<double>(), 4.0);
  EXPECT_EQ(error_of([&] { m.control(id, {{"cmd", "set_speed"}, {"speed", -1}}); }).field(),
            "speed");
}

TEST(SessionManager, StartAtEndCompletesImmediately) {
  SessionManager m;
  const std::string id = m.create();
  m.put_scenario(id, io::save_scenario(ref::two_site_scenario()));
  run_to_end(m, id);
  Recorder rec;
  m.subscribe(id, false, rec.sink());
  const ControlResult r = m.control(id, cmd("start"));
  EXPECT_FALSE(r.started_generation);
  EXPECT_TRUE(r.finished);
  EXPECT_TRUE(rec.completed());
  EXPECT_EQ(rec.messages.back()["ticks"], 7);
  EXPECT_EQ(error_of([&] { m.control(id, cmd("step")); }).code(), ErrorCode::kConflict);
}

TEST(SessionManager, StationaryStreamIsAllNone) {
  SessionManager m;
  const std::string id = m.create();
  m.put_scenario(id, io::save_scenario(ref::stationary_scenario(15)));
  Recorder rec;
  m.subscribe(id, false, rec.sink());
  run_to_end(m, id);
  const auto ticks = rec.ticks();
  ASSERT_EQ(ticks.size(), 15u);
  for (const json& t : ticks) EXPECT_EQ(t["event"], "none");
  EXPECT_TRUE(rec.completed());
}

TEST(SessionManager, TwoSiteStreamHasOneSwap) {
  SessionManager m;
  const std::string id = m.create();
  m.put_scenario(id, io::save_scenario(ref::two_site_scenario()));
  Recorder rec;
  m.subscribe(id, false, rec.sink());
  run_to_end(m, id);
  int swaps = 0;
  for (const json& t : rec.ticks()) {
    if (t["event"] != "none") {
      EXPECT_EQ(t["event"], "swap");
      ++swaps;
    }
  }
  EXPECT_EQ(swaps, 1);
}

TEST(SessionManager, StreamEqualsBatch) {
  for (const sim::Scenario& s : {ref::random_plane_scenario(200, 5, 1.6, 42, 400),
                                 ref::grid_network_scenario(8, 8, 12, 3, 1.0, 5, 300)}) {
    SessionManager m;
    const std::string id = m.create();
    m.put_scenario(id, io::save_scenario(s));
    Recorder rec;
    m.subscribe(id, false, rec.sink());
    run_to_end(m, id);
    EXPECT_EQ(rec.ticks(), batch_json(s));
  }
}

TEST(SessionManager, CellOnlyWhenRequested) {
  SessionManager m;
  const std::string id = m.create();
  m.put_scenario(id, io::save_scenario(ref::random_plane_scenario(30, 2, 1.0, 4, 20)));
  Recorder plain;
  Recorder cells;
  m.subscribe(id, false, plain.sink());
  m.subscribe(id, true, cells.sink());
  m.control(id, cmd("step"));
  EXPECT_FALSE(plain.ticks()[0].contains("cell"));
  ASSERT_TRUE(cells.ticks()[0].contains("cell"));
  EXPECT_GE(cells.ticks()[0]["cell"].size(), 3u);
  json without = cells.ticks()[0];
  without.erase("cell");
  EXPECT_EQ(without, plain.ticks()[0]);
}

TEST(SessionManager, DeleteOnlySiteRejected) {
  SessionManager m;
  const std::string id = m.create();
  sim::Scenario s = ref::two_site_scenario();
  s.sites.pop_back();
  m.put_scenario(id, io::save_scenario(s));
  const Error e = error_of([&] { m.edit(id, {{"op", "delete_site"}, {"id", 0}}); });
  EXPECT_EQ(e.code(), ErrorCode::kTooFewSites);
  EXPECT_EQ(io::load_scenario(m.get_scenario(id)), s);
}

TEST(SessionManager, AddSiteMidRunIsUsed) {
  SessionManager m;
  const std::string id = m.create();
  m.put_scenario(id, io::save_scenario(ref::two_site_scenario()));
  Recorder rec;
  m.subscribe(id, false, rec.sink());
  m.control(id, cmd("step"));
  m.control(id, cmd("step"));
  const auto added = m.edit(id, {{"op", "add_site"}, {"x", 5.0}, {"y", 0.5}});
  EXPECT_EQ(added, 2);
  const ControlResult r = m.control(id, cmd("step"));
  EXPECT_EQ((*r.tick)["t"], 2);
  EXPECT_EQ((*r.tick)["knn"], json::array({2}));
  // The rest of the run agrees with the oracle on the edited scenario.
  const sim::Scenario edited = io::load_scenario(m.get_scenario(id));
  const auto oracle = sim::brute_force_oracle(edited);
  run_to_end(m, id);
  for (const json& t : rec.ticks()) {
    const auto tick = t["t"].get<std::uint64_t>();
    if (tick >= 2) {
      EXPECT_EQ(t["knn"].get<std::vector<std::int64_t>>(), oracle[tick].knn) << tick;
    }
  }
}

TEST(SessionManager, NetworkEdits) {
  SessionManager m;
  const std::string id = m.create();
  sim::Scenario s = ref::grid_network_scenario(3, 3, 2, 1, 1.0, 1, 10);
  s.network_path = {0, 1};
  m.put_scenario(id, io::save_scenario(s));
  // Vertex 9 hangs off vertex 8 by one edge; removing that edge disconnects it.
  EXPECT_EQ(error_of([&] { m.edit(id, {{"op", "add_node"}, {"x", 3.0}, {"y", 3.0}}); }).code(),
            ErrorCode::kConnectivity);
  EXPECT_EQ(m.edit(id, {{"op", "add_node"}, {"x", 3.0}, {"y", 3.0}, {"connect", {8}}}), 9);
  const Error bridge = error_of([&] { m.edit(id, {{"op", "delete_edge"}, {"id", 12}}); });
  EXPECT_EQ(bridge.code(), ErrorCode::kConnectivity);
  EXPECT_EQ(bridge.field(), "graph");
  m.edit(id, {{"op", "move_node"}, {"id", 9}, {"x", 4.0}, {"y", 4.0}});
  const sim::Scenario now = io::load_scenario(m.get_scenario(id));
  EXPECT_FALSE(now.edges.back().length.has_value());
  const Error on_path = error_of([&] { m.edit(id, {{"op", "delete_node"}, {"id", 1}}); });
  EXPECT_EQ(on_path.code(), ErrorCode::kTrajectory);
  m.edit(id, {{"op", "add_site"}, {"vertex", 9}});
  m.edit(id, {{"op", "delete_node"}, {"id", 9}});
  EXPECT_EQ(io::load_scenario(m.get_scenario(id)).network_sites, s.network_sites);
  const Error adjacency =
      error_of([&] { m.edit(id, {{"op", "set_trajectory"}, {"vertices", {0, 4}}}); });
  EXPECT_EQ(adjacency.code(), ErrorCode::kTrajectory);
  m.edit(id, {{"op", "set_trajectory"}, {"vertices", {0, 3, 4}}});
  EXPECT_EQ(io::load_scenario(m.get_scenario(id)).network_path,
            (std::vector<net::VertexId>{0, 3, 4}));
}

TEST(SessionManager, InvalidOpForMode) {
  SessionManager m;
  const std::string id = m.create();
  m.put_scenario(id, io::save_scenario(ref::two_site_scenario()));
  for (const char* op : {"add_node", "move_node", "delete_node", "add_edge", "delete_edge"}) {
    const Error e = error_of([&] { m.edit(id, {{"op", op}, {"id", 0}}); });
    EXPECT_EQ(e.field(), "op") << op;
  }
  EXPECT_EQ(error_of([&] { m.edit(id, {{"op", "teleport"}}); }).field(), "op");
  EXPECT_EQ(error_of([&] { m.control(id, cmd("rewind")); }).field(), "cmd");
}

TEST(SessionManager, DraftCanBeBuiltByEdits) {
  SessionManager m;
  const std::string id = m.create();
  EXPECT_THROW(m.control(id, cmd("start")), Error);
  for (int i = 0; i < 8; ++i) {
    m.edit(id, {{"op", "add_site"}, {"x", 10.0 * i}, {"y", 5.0 * (i % 3)}});
  }
  m.edit(id, {{"op", "set_trajectory"}, {"points", {{0, 0}, {50, 50}}}});
  const ControlResult r = m.control(id, cmd("step"));
  EXPECT_EQ((*r.tick)["knn"].size(), 5u);
}

TEST(SessionManager, EditsAreIsolated) {
  SessionManager m;
  const std::string a = m.create();
  const std::string b = m.create();
  const sim::Scenario s = ref::random_plane_scenario(40, 3, 1.6, 6, 60);
  m.put_scenario(a, io::save_scenario(s));
  m.put_scenario(b, io::save_scenario(s));
  Recorder rec;
  m.subscribe(b, false, rec.sink());
  const auto ga = *m.control(a, cmd("start")).started_generation;
  const auto gb = *m.control(b, cmd("start")).started_generation;
  for (int t = 0; t < 60; ++t) {
    if (t % 7 == 3) m.edit(a, {{"op", "add_site"}, {"x", 1.0 * t}, {"y", 100.0 - t}});
    m.pump(a, ga);
    m.pump(b, gb);
  }
  EXPECT_EQ(rec.ticks(), batch_json(s));
}

TEST(SessionManager, TtlExpiry) {
  auto now = std::make_shared<std::atomic<std::int64_t>>(0);
  SessionManager m(std::chrono::minutes(30), [now] {
    return Clock::time_point(std::chrono::seconds(now->load()));
  });
  const std::string idle = m.create();
  const std::string watched = m.create();
  const std::string busy = m.create();
  m.put_scenario(busy, io::save_scenario(ref::two_site_scenario()));
  m.control(busy, cmd("start"));
  const auto sub = m.subscribe(watched, false, [](const std::string&) {});
  now->store(29 * 60);
  EXPECT_EQ(m.expire(), 0u);
  now->store(31 * 60);
  EXPECT_EQ(m.expire(), 1u);
  EXPECT_FALSE(m.exists(idle));
  EXPECT_TRUE(m.exists(watched));
  EXPECT_TRUE(m.exists(busy));
  m.unsubscribe(watched, sub);
  now->store(62 * 60);
  EXPECT_EQ(m.expire(), 1u);
  EXPECT_FALSE(m.exists(watched));
}

// Socket-level tests against a live server.

struct HttpResult {
  int status = 0;
  std::string body;
  json body_json() const { return json::parse(body); }
};

HttpResult request(unsigned short port, http::verb verb, const std::string& target,
                   const std::string& body = {}) {
  asio::io_context ioc;
  beast::tcp_stream stream(ioc);
  stream.connect(tcp::endpoint(asio::ip::make_address("127.0.0.1"), port));
  http::request<http::string_body> req{verb, target, 11};
  req.set(http::field::host, "127.0.0.1");
  req.body() = body;
  req.prepare_payload();
  http::write(stream, req);
  beast::flat_buffer buffer;
  http::response<http::string_body> res;
  http::read(stream, buffer, res);
  beast::error_code ec;
  stream.socket().shutdown(tcp::socket::shutdown_both, ec);
  return {static_cast<int>(res.result_int()), res.body()};
}

class LiveServer : public ::testing::Test {
 protected:
  void SetUp() override {
    ServiceConfig config;
    config.address = "127.0.0.1";
    config.port = 0;
    config.tick_interval = std::chrono::milliseconds(1);
    config.static_dir = static_dir();
    server_ = std::make_unique<Server>(config);
    port_ = server_->start();
  }
  virtual std::string static_dir() { return {}; }

  std::string create() {
    const HttpResult r = request(port_, http::verb::post, "/api/sessions");
    EXPECT_EQ(r.status, 200);
    return r.body_json()["id"];
  }

  std::unique_ptr<Server> server_;
  unsigned short port_ = 0;
};

struct WsClient {
  asio::io_context ioc;
  websocket::stream<tcp::socket> ws{ioc};

  WsClient(unsigned short port, const std::string& target) {
    ws.next_layer().connect(tcp::endpoint(asio::ip::make_address("127.0.0.1"), port));
    ws.handshake("127.0.0.1", target);
  }

  // Reads tick messages until the completion message arrives.
  std::vector<json> read_run() {
    std::vector<json> out;
    for (;;) {
      beast::flat_buffer buffer;
      ws.read(buffer);
      json m = json::parse(beast::buffers_to_string(buffer.data()));
      if (m.value("type", "") == "complete") return out;
      out.push_back(std::move(m));
    }
  }
};

TEST_F(LiveServer, CreateAndGet) {
  const std::string a = create();
  const std::string b = create();
  EXPECT_NE(a, b);
  const HttpResult get = request(port_, http::verb::get, "/api/sessions/" + a + "/scenario");
  EXPECT_EQ(get.status, 200);
  EXPECT_EQ(get.body, io::save_scenario(sim::default_scenario(sim::Mode::kPlane)));
  EXPECT_EQ(request(port_, http::verb::get, "/api/sessions/" + a).body_json()["status"], "idle");
  EXPECT_EQ(request(port_, http::verb::get, "/api/sessions/zzz/scenario").status, 404);
  EXPECT_EQ(request(port_, http::verb::delete_, "/api/sessions").status, 405);
}

TEST_F(LiveServer, PutErrorsNameTheField) {
  const std::string id = create();
  const std::string target = "/api/sessions/" + id + "/scenario";
  json doc = json::parse(io::save_scenario(ref::two_site_scenario()));
  EXPECT_EQ(request(port_, http::verb::put, target, doc.dump()).status, 200);
  EXPECT_EQ(request(port_, http::verb::get, target).body,
            io::save_scenario(ref::two_site_scenario()));
  doc.erase("k");
  const HttpResult bad = request(port_, http::verb::put, target, doc.dump());
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(bad.body_json()["field"], "k");
  EXPECT_EQ(bad.body_json()["error"], "schema");
  EXPECT_EQ(request(port_, http::verb::put, target, "{oops").status, 400);
  const HttpResult edit = request(port_, http::verb::post, "/api/sessions/" + id + "/edit",
                                  R"({"op":"delete_site","id":7})");
  EXPECT_EQ(edit.status, 404);
}

TEST_F(LiveServer, WebSocketStreamEqualsBatch) {
  const sim::Scenario s = ref::random_plane_scenario(100, 5, 1.6, 42, 300);
  const std::string id = create();
  request(port_, http::verb::put, "/api/sessions/" + id + "/scenario", io::save_scenario(s));
  WsClient client(port_, "/ws/sessions/" + id);
  const HttpResult start =
      request(port_, http::verb::post, "/api/sessions/" + id + "/control", R"({"cmd":"start"})");
  EXPECT_EQ(start.status, 200);
  EXPECT_EQ(start.body_json()["status"], "running");
  EXPECT_EQ(client.read_run(), batch_json(s));
  EXPECT_EQ(request(port_, http::verb::get, "/api/sessions/" + id).body_json()["status"], "idle");
}

TEST_F(LiveServer, WebSocketCellAndStep) {
  const std::string id = create();
  request(port_, http::verb::put, "/api/sessions/" + id + "/scenario",
          io::save_scenario(ref::two_site_scenario()));
  WsClient client(port_, "/ws/sessions/" + id + "?cell=1");
  const std::string control = "/api/sessions/" + id + "/control";
  const HttpResult step = request(port_, http::verb::post, control, R"({"cmd":"step"})");
  EXPECT_EQ(step.body_json()["tick"]["t"], 0);
  EXPECT_EQ(step.body_json()["status"], "paused");
  beast::flat_buffer buffer;
  client.ws.read(buffer);
  const json m = json::parse(beast::buffers_to_string(buffer.data()));
  EXPECT_EQ(m["t"], 0);
  EXPECT_EQ(m["cell"].size(), 4u);
  for (const char* key : {"t", "pos", "knn", "ins", "prefetch", "valid", "event", "green_radius",
                          "red_radius"}) {
    EXPECT_TRUE(m.contains(key)) << key;
  }
  EXPECT_EQ(request(port_, http::verb::post, control, R"({"cmd":"jump"})").status, 400);
}

TEST_F(LiveServer, UnknownSessionClosesSocket) {
  WsClient client(port_, "/ws/sessions/missing");
  beast::flat_buffer buffer;
  beast::error_code ec;
  client.ws.read(buffer, ec);
  EXPECT_EQ(ec, websocket::error::closed);
  EXPECT_EQ(client.ws.reason().code, 4404);
}

TEST_F(LiveServer, NoStaticDirMeansApiOnly) {
  EXPECT_EQ(request(port_, http::verb::get, "/").status, 404);
  EXPECT_EQ(request(port_, http::verb::post, "/api/sessions").status, 200);
}

TEST_F(LiveServer, PortInUse) {
  ServiceConfig config;
  config.address = "127.0.0.1";
  config.port = port_;
  Server other(config);
  EXPECT_THROW(other.start(), std::runtime_error);
}

class StaticServer : public LiveServer {
 protected:
  std::string static_dir() override {
    dir_ = std::filesystem::temp_directory_path() / ("insq_static_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_ / "js");
    std::ofstream(dir_ / "index.html") << "<html>insq</html>";
    std::ofstream(dir_ / "js" / "app.js") << "let x = 1;";
    return dir_.string();
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(StaticServer, ServesFiles) {
  const HttpResult index = request(port_, http::verb::get, "/");
  EXPECT_EQ(index.status, 200);
  EXPECT_EQ(index.body, "<html>insq</html>");
  EXPECT_EQ(request(port_, http::verb::get, "/js/app.js").body, "let x = 1;");
  EXPECT_EQ(request(port_, http::verb::get, "/js/../../etc/passwd").status, 404);
  EXPECT_EQ(request(port_, http::verb::get, "/missing.css").status, 404);
  EXPECT_EQ(request(port_, http::verb::post, "/api/sessions").status, 200);
}

}  // namespace
