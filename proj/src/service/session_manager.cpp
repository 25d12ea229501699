#include "insq/service/session_manager.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "insq/error.hpp"
#include "insq/io/scenario_io.hpp"
#include "insq/sim/simulation.hpp"

namespace insq::service {

using nlohmann::json;
using sim::Mode;
using sim::Scenario;

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kIdle: return "idle";
    case RunStatus::kRunning: return "running";
    case RunStatus::kPaused: return "paused";
  }
  return "idle";
}

struct SessionManager::Session {
  struct Subscriber {
    std::uint64_t id;
    bool want_cell;
    Sink sink;
  };

  std::mutex mutex;
  Scenario scenario = sim::default_scenario(Mode::kPlane);
  std::unique_ptr<sim::Simulation> simulation;
  RunStatus status = RunStatus::kIdle;
  std::uint64_t generation = 0;
  Clock::time_point last_access;
  std::uint64_t next_subscriber = 0;
  std::vector<Subscriber> subscribers;

  void publish(const sim::TickReport& r) {
    std::optional<geo::Polygon> cell;
    const bool any_cell = std::any_of(subscribers.begin(), subscribers.end(),
                                      [](const Subscriber& s) { return s.want_cell; });
    if (any_cell && scenario.mode == Mode::kPlane) cell = sim::cell_polygon(scenario, r);
    const std::string plain = io::report_to_json(r).dump();
    const std::string with_cell = cell ? io::report_to_json(r, cell).dump() : plain;
    for (const Subscriber& s : subscribers) s.sink(s.want_cell ? with_cell : plain);
  }

  void publish_complete() {
    const std::string text =
        json{{"type", "complete"}, {"ticks", simulation ? simulation->next_tick() : 0}}.dump();
    for (const Subscriber& s : subscribers) s.sink(text);
  }

  sim::Simulation& runnable() {
    if (!simulation) sim::validate_scenario(scenario);
    if (!simulation) throw Error(ErrorCode::kConflict, "scenario is not runnable");
    return *simulation;
  }
};

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what, field);
}

const json& need(const json& op, const char* key) {
  const auto it = op.find(key);
  if (it == op.end()) bad(key, std::string("missing \"") + key + "\"");
  return *it;
}

double number(const json& op, const char* key) {
  const json& v = need(op, key);
  if (!v.is_number()) bad(key, std::string("\"") + key + "\" must be a number");
  return v.get<double>();
}

std::int64_t integer(const json& v, const char* key) {
  if (!v.is_number_integer()) bad(key, std::string("\"") + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

std::int64_t integer(const json& op, const char* key, std::optional<std::int64_t> fallback) {
  const auto it = op.find(key);
  if (it == op.end()) {
    if (fallback) return *fallback;
    bad(key, std::string("missing \"") + key + "\"");
  }
  return integer(*it, key);
}

template <typename T, typename IdOf>
std::int64_t next_id(const std::vector<T>& items, IdOf id_of) {
  std::int64_t id = 0;
  for (const T& item : items) id = std::max(id, id_of(item) + 1);
  return id;
}

void require_network(const Scenario& s, const std::string& op) {
  if (s.mode != Mode::kNetwork) bad("op", op + " requires network mode");
}

std::optional<std::int64_t> apply_edit(Scenario& s, const json& op) {
  if (!op.is_object()) bad("op", "edit must be a JSON object");
  const json& name_value = need(op, "op");
  if (!name_value.is_string()) bad("op", "\"op\" must be a string");
  const std::string name = name_value.get<std::string>();
  const bool plane = s.mode == Mode::kPlane;

  auto site_at = [&](std::int64_t id) {
    const auto it = std::find_if(s.sites.begin(), s.sites.end(),
                                 [&](const geo::Site& site) { return site.id == id; });
    if (it == s.sites.end()) throw Error(ErrorCode::kNotFound, "no site " + std::to_string(id), "id");
    return it;
  };
  auto network_site_at = [&](std::int64_t id) {
    const auto it = std::find(s.network_sites.begin(), s.network_sites.end(), id);
    if (it == s.network_sites.end()) {
      throw Error(ErrorCode::kNotFound, "no site on vertex " + std::to_string(id), "id");
    }
    return it;
  };
  auto vertex_at = [&](std::int64_t id) {
    const auto it = std::find_if(s.vertices.begin(), s.vertices.end(),
                                 [&](const net::Vertex& v) { return v.id == id; });
    if (it == s.vertices.end()) {
      throw Error(ErrorCode::kNotFound, "no vertex " + std::to_string(id), "id");
    }
    return it;
  };
  auto has_vertex = [&](std::int64_t id) {
    return std::any_of(s.vertices.begin(), s.vertices.end(),
                       [&](const net::Vertex& v) { return v.id == id; });
  };

  if (name == "add_site") {
    if (plane) {
      const auto id = integer(op, "id", next_id(s.sites, [](const geo::Site& x) { return x.id; }));
      if (std::any_of(s.sites.begin(), s.sites.end(),
                      [&](const geo::Site& site) { return site.id == id; })) {
        throw Error(ErrorCode::kDuplicateId, "site " + std::to_string(id) + " exists", "id");
      }
      s.sites.push_back({id, {number(op, "x"), number(op, "y")}});
      return id;
    }
    const auto v = integer(need(op, "vertex"), "vertex");
    if (!has_vertex(v)) throw Error(ErrorCode::kNotFound, "no vertex " + std::to_string(v), "vertex");
    if (std::find(s.network_sites.begin(), s.network_sites.end(), v) != s.network_sites.end()) {
      throw Error(ErrorCode::kDuplicateId, "vertex " + std::to_string(v) + " hosts a site",
                  "vertex");
    }
    s.network_sites.push_back(v);
    return v;
  }
  if (name == "move_site") {
    const auto id = integer(need(op, "id"), "id");
    if (plane) {
      site_at(id)->pos = {number(op, "x"), number(op, "y")};
      return id;
    }
    const auto v = integer(need(op, "vertex"), "vertex");
    if (!has_vertex(v)) throw Error(ErrorCode::kNotFound, "no vertex " + std::to_string(v), "vertex");
    *network_site_at(id) = v;
    return v;
  }
  if (name == "delete_site") {
    const auto id = integer(need(op, "id"), "id");
    if (plane) {
      s.sites.erase(site_at(id));
    } else {
      s.network_sites.erase(network_site_at(id));
    }
    return id;
  }
  if (name == "add_node") {
    require_network(s, name);
    const auto id = integer(op, "id", next_id(s.vertices, [](const net::Vertex& v) { return v.id; }));
    if (has_vertex(id)) {
      throw Error(ErrorCode::kDuplicateId, "vertex " + std::to_string(id) + " exists", "id");
    }
    s.vertices.push_back({id, {number(op, "x"), number(op, "y")}});
    // A node added to a runnable network must arrive with its edges.
    if (const auto it = op.find("connect"); it != op.end()) {
      if (!it->is_array()) bad("connect", "\"connect\" must be an array of vertex ids");
      for (const json& other : *it) {
        const auto v = integer(other, "connect");
        if (!has_vertex(v) || v == id) {
          throw Error(ErrorCode::kNotFound, "no vertex " + std::to_string(v), "connect");
        }
        s.edges.push_back(
            {next_id(s.edges, [](const net::EdgeSpec& e) { return e.id; }), id, v, std::nullopt});
      }
    }
    return id;
  }
  if (name == "move_node") {
    require_network(s, name);
    const auto id = integer(need(op, "id"), "id");
    vertex_at(id)->pos = {number(op, "x"), number(op, "y")};
    for (net::EdgeSpec& e : s.edges) {
      if (e.u == id || e.v == id) e.length.reset();
    }
    return id;
  }
  if (name == "delete_node") {
    require_network(s, name);
    const auto id = integer(need(op, "id"), "id");
    const auto vertex = vertex_at(id);
    if (std::find(s.network_path.begin(), s.network_path.end(), id) != s.network_path.end()) {
      throw Error(ErrorCode::kTrajectory, "vertex " + std::to_string(id) + " is on the trajectory",
                  "trajectory");
    }
    s.vertices.erase(vertex);
    std::erase_if(s.edges, [&](const net::EdgeSpec& e) { return e.u == id || e.v == id; });
    std::erase(s.network_sites, id);
    return id;
  }
  if (name == "add_edge") {
    require_network(s, name);
    const auto id =
        integer(op, "id", next_id(s.edges, [](const net::EdgeSpec& e) { return e.id; }));
    if (std::any_of(s.edges.begin(), s.edges.end(),
                    [&](const net::EdgeSpec& e) { return e.id == id; })) {
      throw Error(ErrorCode::kDuplicateId, "edge " + std::to_string(id) + " exists", "id");
    }
    net::EdgeSpec e{id, integer(need(op, "u"), "u"), integer(need(op, "v"), "v"), std::nullopt};
    if (!has_vertex(e.u)) throw Error(ErrorCode::kNotFound, "no vertex " + std::to_string(e.u), "u");
    if (!has_vertex(e.v)) throw Error(ErrorCode::kNotFound, "no vertex " + std::to_string(e.v), "v");
    if (op.contains("length")) e.length = number(op, "length");
    s.edges.push_back(e);
    return id;
  }
  if (name == "delete_edge") {
    require_network(s, name);
    const auto id = integer(need(op, "id"), "id");
    const auto removed =
        std::erase_if(s.edges, [&](const net::EdgeSpec& e) { return e.id == id; });
    if (removed == 0) throw Error(ErrorCode::kNotFound, "no edge " + std::to_string(id), "id");
    return id;
  }
  if (name == "set_trajectory") {
    if (plane) {
      const json& points = need(op, "points");
      if (!points.is_array()) bad("points", "\"points\" must be an array of [x, y]");
      std::vector<geo::Point> path;
      for (const json& p : points) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
          bad("points", "\"points\" must be an array of [x, y]");
        }
        path.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      s.path = std::move(path);
    } else {
      const json& vertices = need(op, "vertices");
      if (!vertices.is_array()) bad("vertices", "\"vertices\" must be an array of vertex ids");
      std::vector<net::VertexId> path;
      for (const json& v : vertices) path.push_back(integer(v, "vertices"));
      s.network_path = std::move(path);
    }
    return std::nullopt;
  }
  bad("op", "unknown edit op \"" + name + "\"");
}

std::string fresh_token() {
  std::random_device rd;
  char buf[33];
  const std::uint64_t a = (std::uint64_t(rd()) << 32) | rd();
  const std::uint64_t b = (std::uint64_t(rd()) << 32) | rd();
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(a),
                static_cast<unsigned long long>(b));
  return buf;
}

}  // namespace

SessionManager::SessionManager(std::chrono::seconds ttl, ClockFn clock)
    : ttl_(ttl), clock_(std::move(clock)) {}

SessionManager::~SessionManager() = default;

std::string SessionManager::create() {
  auto session = std::make_shared<Session>();
  session->last_access = clock_();
  std::lock_guard lock(mutex_);
  std::string id;
  do {
    id = fresh_token();
  } while (sessions_.count(id));
  sessions_.emplace(id, std::move(session));
  return id;
}

bool SessionManager::exists(const std::string& id) const {
  std::lock_guard lock(mutex_);
  return sessions_.count(id) > 0;
}

std::size_t SessionManager::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kNotFound, "unknown session", "session");
  return it->second;
}

std::string SessionManager::get_scenario(const std::string& id) {
  const auto session = find(id);
  std::lock_guard lock(session->mutex);
  session->last_access = clock_();
  return io::save_scenario(session->scenario);
}

void SessionManager::put_scenario(const std::string& id, const std::string& text) {
  const auto session = find(id);
  Scenario scenario = io::load_scenario(text);
  auto simulation = std::make_unique<sim::Simulation>(scenario);
  std::lock_guard lock(session->mutex);
  session->last_access = clock_();
  session->scenario = std::move(scenario);
  session->simulation = std::move(simulation);
  session->status = RunStatus::kIdle;
  ++session->generation;
}

std::optional<std::int64_t> SessionManager::edit(const std::string& id, const json& op) {
  const auto session = find(id);
  std::lock_guard lock(session->mutex);
  session->last_access = clock_();
  Scenario next = session->scenario;
  const std::optional<std::int64_t> touched = apply_edit(next, op);
  if (session->simulation) {
    session->simulation->replace_scenario(next);
  } else {
    // A draft that is not yet runnable may be edited freely until it is.
    try {
      session->simulation = std::make_unique<sim::Simulation>(next);
    } catch (const Error&) {
    }
  }
  session->scenario = std::move(next);
  return touched;
}

ControlResult SessionManager::control(const std::string& id, const json& cmd) {
  const auto session = find(id);
  std::lock_guard lock(session->mutex);
  session->last_access = clock_();
  if (!cmd.is_object() || !cmd.contains("cmd") || !cmd["cmd"].is_string()) {
    bad("cmd", "body must be {\"cmd\": ...}");
  }
  const std::string name = cmd["cmd"].get<std::string>();
  ControlResult result;

  if (name == "start") {
    sim::Simulation& simulation = session->runnable();
    if (session->status != RunStatus::kRunning) {
      if (simulation.finished()) {
        session->status = RunStatus::kIdle;
        session->publish_complete();
      } else {
        session->status = RunStatus::kRunning;
        result.started_generation = ++session->generation;
      }
    }
  } else if (name == "pause") {
    if (session->status == RunStatus::kRunning) {
      session->status = RunStatus::kPaused;
      ++session->generation;
    }
  } else if (name == "step") {
    if (session->status == RunStatus::kRunning) {
      throw Error(ErrorCode::kConflict, "step is only allowed while not running", "cmd");
    }
    sim::Simulation& simulation = session->runnable();
    if (simulation.finished()) throw Error(ErrorCode::kConflict, "run is over", "cmd");
    const sim::TickReport r = simulation.step();
    session->publish(r);
    result.tick = io::report_to_json(r);
    session->status = RunStatus::kPaused;
    if (simulation.finished()) {
      session->status = RunStatus::kIdle;
      session->publish_complete();
    }
  } else if (name == "set_speed") {
    const double speed = number(cmd, "speed");
    if (session->simulation) {
      session->simulation->set_speed(speed);
    } else if (!std::isfinite(speed) || speed <= 0.0) {
      bad("speed", "speed must be positive");
    }
    session->scenario.speed = speed;
  } else {
    bad("cmd", "unknown command \"" + name + "\"");
  }

  result.status = session->status;
  if (session->simulation) {
    result.next_tick = session->simulation->next_tick();
    result.finished = session->simulation->finished();
  }
  return result;
}

RunStatus SessionManager::status(const std::string& id) const {
  const auto session = find(id);
  std::lock_guard lock(session->mutex);
  return session->status;
}

bool SessionManager::pump(const std::string& id, std::uint64_t generation) {
  std::shared_ptr<Session> session;
  try {
    session = find(id);
  } catch (const Error&) {
    return false;
  }
  std::lock_guard lock(session->mutex);
  if (session->generation != generation || session->status != RunStatus::kRunning ||
      !session->simulation) {
    return false;
  }
  sim::Simulation& simulation = *session->simulation;
  session->last_access = clock_();
  session->publish(simulation.step());
  if (simulation.finished()) {
    session->status = RunStatus::kIdle;
    ++session->generation;
    session->publish_complete();
    return false;
  }
  return true;
}

std::uint64_t SessionManager::subscribe(const std::string& id, bool want_cell, Sink sink) {
  const auto session = find(id);
  std::lock_guard lock(session->mutex);
  session->last_access = clock_();
  const std::uint64_t sub = session->next_subscriber++;
  session->subscribers.push_back({sub, want_cell, std::move(sink)});
  return sub;
}

void SessionManager::unsubscribe(const std::string& id, std::uint64_t subscription) {
  std::shared_ptr<Session> session;
  try {
    session = find(id);
  } catch (const Error&) {
    return;
  }
  std::lock_guard lock(session->mutex);
  session->last_access = clock_();
  std::erase_if(session->subscribers,
                [&](const Session::Subscriber& s) { return s.id == subscription; });
}

std::size_t SessionManager::expire() {
  const Clock::time_point now = clock_();
  std::lock_guard lock(mutex_);
  return std::erase_if(sessions_, [&](const auto& entry) {
    Session& s = *entry.second;
    std::lock_guard session_lock(s.mutex);
    return s.status != RunStatus::kRunning && s.subscribers.empty() &&
           now - s.last_access > ttl_;
  });
}

}  // namespace insq::service
