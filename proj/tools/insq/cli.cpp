#include "cli.hpp"

#include <CLI11.hpp>
#include <csignal>
#include <fstream>
#include <optional>
#include <pthread.h>

#include "insq/error.hpp"
#include "insq/io/scenario_io.hpp"
#include "insq/service/server.hpp"
#include "insq/sim/oracle.hpp"
#include "insq/sim/simulation.hpp"

namespace insq::cli {

namespace {

struct GenerateArgs {
  std::string mode = "plane";
  std::optional<std::size_t> n;
  std::string grid;
  std::size_t k = 5;
  std::optional<double> rho;
  std::uint64_t ticks = 1000;
  std::uint64_t seed = 0;
  std::string output;
};

struct RunArgs {
  std::string input;
  std::string metrics;
  std::string report;
};

struct ServeArgs {
  std::string address = "0.0.0.0";
  unsigned short port = 8080;
  std::string static_dir;
  double ttl_minutes = 30;
  int tick_ms = 100;
  int threads = 2;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  return out;
}

int generate(const GenerateArgs& a, std::ostream& out) {
  io::GenerateParams p;
  p.mode = sim::mode_from_string(a.mode);
  p.k = a.k;
  p.rho = a.rho.value_or(p.mode == sim::Mode::kPlane ? 1.6 : 1.0);
  p.ticks = a.ticks;
  p.seed = a.seed;
  if (p.mode == sim::Mode::kNetwork) {
    if (a.grid.empty()) throw Error(ErrorCode::kInvalidArgument, "--grid WxH is required", "grid");
    const auto x = a.grid.find('x');
    try {
      if (x == std::string::npos) throw std::invalid_argument("grid");
      std::size_t used = 0;
      p.grid_width = std::stoi(a.grid.substr(0, x), &used);
      if (used != x) throw std::invalid_argument("grid");
      p.grid_height = std::stoi(a.grid.substr(x + 1), &used);
      if (used != a.grid.size() - x - 1) throw std::invalid_argument("grid");
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kInvalidArgument, "--grid must look like 10x8", "grid");
    }
    p.n = a.n.value_or(std::max<std::size_t>(
        1, static_cast<std::size_t>(p.grid_width) * static_cast<std::size_t>(p.grid_height) / 8));
  } else {
    p.n = a.n.value_or(100);
  }
  const sim::Scenario s = io::generate_random(p);
  io::write_scenario_file(a.output, s);
  out << "wrote " << a.output << " (" << sim::to_string(s.mode) << ", " << s.site_count()
      << " sites, k=" << s.k << ", rho=" << s.rho << ", ticks=" << *s.ticks << ")\n";
  return kOk;
}

int run_scenario(const RunArgs& a, std::ostream& out) {
  const sim::Scenario s = io::read_scenario_file(a.input);
  const sim::SimulationResult r = sim::run_simulation(s);
  if (!a.metrics.empty()) {
    std::ofstream csv = open_output(a.metrics);
    sim::write_metrics_csv(csv, r.reports);
  }
  if (!a.report.empty()) {
    std::ofstream jsonl = open_output(a.report);
    for (const sim::TickReport& t : r.reports) jsonl << io::report_to_json(t).dump() << '\n';
  }
  const engine::Metrics& m = r.metrics;
  out << "ticks=" << m.ticks << " validations=" << m.validations << " reranks=" << m.reranks
      << " swaps=" << m.swaps << " recomputes=" << (m.full_recomputes - 1)
      << " knn_changes=" << m.knn_changes << " false_alarms=" << m.false_alarms << '\n';
  return kOk;
}

int verify(const std::string& input, std::ostream& out) {
  const sim::Scenario s = io::read_scenario_file(input);
  const sim::DiffReport d =
      sim::compare_runs(sim::run_simulation(s).reports, sim::brute_force_oracle(s));
  out << "ticks=" << d.total_ticks << " mismatches=" << d.mismatched_ticks.size()
      << " oracle_changes=" << d.oracle_changes << " engine_events=" << d.engine_events
      << " recompute_events=" << d.recompute_events << " invalid_verdicts=" << d.invalid_verdicts
      << '\n';
  if (d.ok()) {
    out << "verified\n";
    return kOk;
  }
  out << "MISMATCH at tick";
  for (std::size_t i = 0; i < d.mismatched_ticks.size() && i < 10; ++i) {
    out << ' ' << d.mismatched_ticks[i];
  }
  out << (d.mismatched_ticks.size() > 10 ? " ...\n" : "\n");
  return kVerifyFailed;
}

int serve(const ServeArgs& a, std::ostream& out) {
  service::ServiceConfig config;
  config.address = a.address;
  config.port = a.port;
  config.static_dir = a.static_dir;
  config.session_ttl = std::chrono::seconds(static_cast<std::int64_t>(a.ttl_minutes * 60));
  config.tick_interval = std::chrono::milliseconds(a.tick_ms);
  config.threads = a.threads;

  // Worker threads inherit the blocked mask, so only sigwait sees these.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  service::Server server(config);
  const unsigned short port = server.start();
  out << "listening on http://" << a.address << ':' << port
      << (a.static_dir.empty() ? " (api only)" : " static=" + a.static_dir) << std::endl;
  int received = 0;
  sigwait(&signals, &received);
  server.stop();
  server.wait();
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"insq: moving k nearest neighbor queries with influential neighbor sets"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "write a random scenario file");
  generate_cmd->add_option("--mode", gen.mode, "plane or network")
      ->check(CLI::IsMember({"plane", "network"}));
  generate_cmd->add_option("--n", gen.n, "number of sites");
  generate_cmd->add_option("--grid", gen.grid, "network grid size, e.g. 10x10");
  generate_cmd->add_option("--k", gen.k, "number of neighbors")->capture_default_str();
  generate_cmd->add_option("--rho", gen.rho, "prefetch ratio (plane 1.6, network 1.0)");
  generate_cmd->add_option("--ticks", gen.ticks, "run length in ticks")->capture_default_str();
  generate_cmd->add_option("--seed", gen.seed, "random seed")->capture_default_str();
  generate_cmd->add_option("-o,--output", gen.output, "scenario file to write")->required();

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "run a scenario and report counters");
  run_cmd->add_option("-i,--input", run_args.input, "scenario file")->required();
  run_cmd->add_option("--metrics", run_args.metrics, "per-tick metrics CSV");
  run_cmd->add_option("--report", run_args.report, "per-tick reports, one JSON per line");

  std::string verify_input;
  auto* verify_cmd = app.add_subcommand("verify", "check every tick against brute force");
  verify_cmd->add_option("-i,--input", verify_input, "scenario file")->required();

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "start the HTTP/WebSocket service");
  serve_cmd->add_option("--address", serve_args.address, "bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve_args.port, "port, 0 for any")
      ->envname("INSQ_PORT")
      ->capture_default_str();
  serve_cmd->add_option("--static", serve_args.static_dir, "directory served at /")
      ->envname("INSQ_STATIC_DIR");
  serve_cmd->add_option("--session-ttl", serve_args.ttl_minutes, "idle session expiry, minutes")
      ->envname("INSQ_SESSION_TTL")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--tick-ms", serve_args.tick_ms, "milliseconds between streamed ticks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--threads", serve_args.threads, "worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*generate_cmd) return generate(gen, out);
    if (*run_cmd) return run_scenario(run_args, out);
    if (*verify_cmd) return verify(verify_input, out);
    if (*serve_cmd) return serve(serve_args, out);
  } catch (const Error& e) {
    err << "error";
    if (!e.field().empty()) err << " [" << e.field() << "]";
    err << ": " << e.what() << '\n';
    return kRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}

}  // namespace insq::cli
