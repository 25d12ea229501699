#include <gtest/gtest.h>

#include <boost/asio.hpp>
#include <boost/beast.hpp>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

#include <json.hpp>

#include "cli.hpp"
#include "insq/io/scenario_io.hpp"
#include "insq/service/server.hpp"
#include "support/scenarios.hpp"

namespace {

using namespace insq;
namespace fs = std::filesystem;
namespace ref = insq::testing;
namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
using tcp = asio::ip::tcp;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "insq");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = insq::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("insq_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const sim::Scenario& s) const {
    io::write_scenario_file(path(name), s);
    return path(name);
  }

  fs::path dir_;
};

TEST_F(Cli, GeneratePlane) {
  const Result r = cli({"generate", "--mode", "plane", "--n", "100", "--k", "5", "--rho", "1.6",
                        "--seed", "42", "-o", path("a.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const sim::Scenario s = io::read_scenario_file(path("a.json"));
  EXPECT_EQ(s.sites.size(), 100u);
  EXPECT_EQ(s.k, 5u);
  EXPECT_EQ(s.rho, 1.6);
  cli({"generate", "--mode", "plane", "--n", "100", "--k", "5", "--rho", "1.6", "--seed", "42",
       "-o", path("b.json")});
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
}

TEST_F(Cli, GenerateNetwork) {
  const Result r = cli({"generate", "--mode", "network", "--grid", "6x4", "--n", "5", "--k", "2",
                        "--ticks", "50", "-o", path("n.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const sim::Scenario s = io::read_scenario_file(path("n.json"));
  EXPECT_EQ(s.vertices.size(), 24u);
  EXPECT_EQ(s.network_sites.size(), 5u);
  EXPECT_EQ(s.rho, 1.0);
  EXPECT_EQ(cli({"generate", "--mode", "network", "--grid", "6by4", "-o", path("x.json")}).code,
            3);
}

TEST_F(Cli, GenerateInfeasibleFails) {
  const Result r = cli({"generate", "--n", "3", "--k", "5", "-o", path("x.json")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("[k]"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("x.json")));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({"run"}).code, 1);
  EXPECT_EQ(cli({"generate", "--mode", "sphere", "-o", path("x.json")}).code, 1);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(Cli, RunTwoSiteSummary) {
  const std::string file = write("two.json", ref::two_site_scenario());
  const Result r = cli({"run", "-i", file, "--metrics", path("m.csv"), "--report", path("r.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("swaps=1"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("recomputes=0"), std::string::npos) << r.out;
  const std::string csv = slurp(path("m.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "tick,event,knn_size,is_size,comparisons,recompute_count");
  std::istringstream lines(slurp(path("r.jsonl")));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(nlohmann::json::parse(line)["t"], count);
    ++count;
  }
  EXPECT_EQ(count, 7);
}

TEST_F(Cli, RunStationaryAllNone) {
  const std::string file = write("still.json", ref::stationary_scenario(12));
  ASSERT_EQ(cli({"run", "-i", file, "--metrics", path("m.csv")}).code, 0);
  std::istringstream lines(slurp(path("m.csv")));
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    EXPECT_NE(line.find(",none,"), std::string::npos) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 12);
}

TEST_F(Cli, RunIsDeterministic) {
  const std::string file = write("p.json", ref::random_plane_scenario(200, 5, 1.6, 42, 500));
  const Result a = cli({"run", "-i", file, "--metrics", path("a.csv"), "--report", path("a.jsonl")});
  const Result b = cli({"run", "-i", file, "--metrics", path("b.csv"), "--report", path("b.jsonl")});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("a.jsonl")), slurp(path("b.jsonl")));
}

TEST_F(Cli, RunLoadErrors) {
  std::ofstream(path("bad.json")) << "{\"version\": 1";
  Result r = cli({"run", "-i", path("bad.json")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("JSON"), std::string::npos);
  EXPECT_EQ(cli({"run", "-i", path("absent.json")}).code, 3);
}

TEST_F(Cli, VerifyPasses) {
  for (const sim::Scenario& s : {ref::two_site_scenario(),
                                 ref::random_plane_scenario(200, 5, 1.6, 42, 1000),
                                 ref::grid_network_scenario(10, 10, 20, 3, 1.0, 2, 500)}) {
    const Result r = cli({"verify", "-i", write("v.json", s)});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("mismatches=0"), std::string::npos);
  }
}

// Runs the real binary; returns its pid and the read end of its stdout.
std::pair<pid_t, FILE*> spawn(const std::vector<std::string>& args) {
  int fds[2];
  if (::pipe(fds) != 0) return {-1, nullptr};
  const pid_t pid = ::fork();
  if (pid == 0) {
    ::dup2(fds[1], STDOUT_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    std::vector<char*> argv;
    for (const std::string& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    ::execv(argv[0], argv.data());
    ::_exit(127);
  }
  ::close(fds[1]);
  return {pid, ::fdopen(fds[0], "r")};
}

int http_status(unsigned short port, http::verb verb, const std::string& target) {
  asio::io_context ioc;
  beast::tcp_stream stream(ioc);
  stream.connect(tcp::endpoint(asio::ip::make_address("127.0.0.1"), port));
  http::request<http::string_body> req{verb, target, 11};
  req.set(http::field::host, "127.0.0.1");
  req.prepare_payload();
  http::write(stream, req);
  beast::flat_buffer buffer;
  http::response<http::string_body> res;
  http::read(stream, buffer, res);
  return static_cast<int>(res.result_int());
}

TEST(CliServe, ServesApiUntilSignalled) {
  auto [pid, out] = spawn({INSQ_BINARY, "serve", "--address", "127.0.0.1", "--port", "0"});
  ASSERT_GT(pid, 0);
  char line[256] = {};
  ASSERT_NE(std::fgets(line, sizeof line, out), nullptr);
  const std::string text = line;
  EXPECT_NE(text.find("api only"), std::string::npos) << text;
  const auto colon = text.rfind(':');
  const auto port = static_cast<unsigned short>(std::stoi(text.substr(colon + 1)));
  EXPECT_EQ(http_status(port, http::verb::post, "/api/sessions"), 200);
  EXPECT_EQ(http_status(port, http::verb::get, "/"), 404);

  // A second server on the same port fails with a runtime error exit.
  auto [other, other_out] =
      spawn({INSQ_BINARY, "serve", "--address", "127.0.0.1", "--port", std::to_string(port)});
  int other_status = 0;
  ::waitpid(other, &other_status, 0);
  std::fclose(other_out);
  EXPECT_TRUE(WIFEXITED(other_status));
  EXPECT_EQ(WEXITSTATUS(other_status), 3);

  ::kill(pid, SIGTERM);
  int status = 0;
  ::waitpid(pid, &status, 0);
  std::fclose(out);
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
}

TEST(CliServe, IdleSessionsExpire) {
  auto now = std::make_shared<std::atomic<std::int64_t>>(0);
  service::ServiceConfig config;
  config.address = "127.0.0.1";
  config.port = 0;
  config.session_ttl = std::chrono::seconds(4);
  config.clock = [now] { return service::Clock::time_point(std::chrono::seconds(now->load())); };
  service::Server server(config);
  const unsigned short port = server.start();
  const std::string id = server.sessions().create();
  EXPECT_EQ(http_status(port, http::verb::get, "/api/sessions/" + id), 200);
  now->store(3600);
  for (int i = 0; i < 30 && server.sessions().exists(id); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  EXPECT_EQ(http_status(port, http::verb::get, "/api/sessions/" + id), 404);
}

}  // namespace
