#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "insq/service/session_manager.hpp"

namespace insq::service {

struct ServiceConfig {
  std::string address = "0.0.0.0";
  unsigned short port = 8080;  // 0 picks a free port
  std::string static_dir;      // empty: API only
  std::chrono::seconds session_ttl = std::chrono::minutes(30);
  std::chrono::milliseconds tick_interval{100};
  int threads = 2;
  ClockFn clock = Clock::now;
};

// HTTP + WebSocket front end over a SessionManager.
//   POST /api/sessions                   -> {"id"}
//   GET|PUT /api/sessions/{id}/scenario
//   POST /api/sessions/{id}/edit         body: {"op": ..., ...}
//   POST /api/sessions/{id}/control      body: {"cmd": start|pause|step|set_speed}
//   WS   /ws/sessions/{id}[?cell=1]      one JSON message per tick
// Errors are {"error", "message", "field"} with 400, 404 or 409.
class Server {
 public:
  explicit Server(ServiceConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts the worker threads. Returns the bound port. Throws
  // boost::system::system_error when the address cannot be bound.
  unsigned short start();
  // Blocks until stop() is called from another thread or a signal handler.
  void wait();
  void stop();

  SessionManager& sessions();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace insq::service
