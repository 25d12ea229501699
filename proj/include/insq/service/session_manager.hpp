#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "insq/sim/scenario.hpp"

namespace insq::service {

using Clock = std::chrono::steady_clock;
using ClockFn = std::function<Clock::time_point()>;
// Receives serialized stream messages. Called with the session locked, so
// it must only hand the text off.
using Sink = std::function<void(const std::string& message)>;

enum class RunStatus { kIdle, kRunning, kPaused };
std::string_view to_string(RunStatus s);

struct ControlResult {
  RunStatus status = RunStatus::kIdle;
  std::uint64_t next_tick = 0;
  bool finished = false;
  // Set when the command moved the session into running; the caller must
  // then drive pump() with this generation until it returns false.
  std::optional<std::uint64_t> started_generation;
  std::optional<nlohmann::json> tick;  // the report produced by "step"
};

// In-memory sessions, each owning one scenario and at most one running
// simulation. Commands on one session are serialized by its lock; distinct
// sessions never share state. Unknown ids throw kNotFound, commands that do
// not fit the run status throw kConflict.
class SessionManager {
 public:
  explicit SessionManager(std::chrono::seconds ttl = std::chrono::minutes(30),
                          ClockFn clock = Clock::now);
  ~SessionManager();

  std::string create();
  bool exists(const std::string& id) const;
  std::size_t size() const;

  std::string get_scenario(const std::string& id);
  // Loads through the file parser, stops any run and resets to tick 0.
  void put_scenario(const std::string& id, const std::string& text);
  // Applies one edit op (see README for the op list). Returns the id the op
  // created or touched, when there is one. A mid-run simulation is
  // recomputed at its current position.
  std::optional<std::int64_t> edit(const std::string& id, const nlohmann::json& op);
  ControlResult control(const std::string& id, const nlohmann::json& cmd);
  RunStatus status(const std::string& id) const;

  // Advances a running session by one tick and publishes it. Returns false
  // once the run is over or `generation` is stale.
  bool pump(const std::string& id, std::uint64_t generation);

  std::uint64_t subscribe(const std::string& id, bool want_cell, Sink sink);
  void unsubscribe(const std::string& id, std::uint64_t subscription);

  // Drops sessions idle for longer than the TTL. Sessions that are running
  // or have subscribers count as active. Returns the number removed.
  std::size_t expire();

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& id) const;

  std::chrono::seconds ttl_;
  ClockFn clock_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace insq::service
