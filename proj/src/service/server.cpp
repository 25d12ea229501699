#include "insq/service/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast.hpp>
#include <deque>
#include <thread>
#include <variant>

#include "insq/error.hpp"

namespace insq::service {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

using Request = http::request<http::string_body>;
using StringResponse = http::response<http::string_body>;
using FileResponse = http::response<http::file_body>;
using Response = std::variant<StringResponse, FileResponse>;

namespace {

constexpr unsigned short kUnknownSessionClose = 4404;

struct Target {
  std::vector<std::string> segments;
  std::string path;
  std::string query;
};

Target split_target(beast::string_view raw) {
  const std::string_view target(raw.data(), raw.size());
  Target t;
  const auto q = target.find('?');
  t.path = std::string(target.substr(0, q));
  if (q != std::string_view::npos) t.query = std::string(target.substr(q + 1));
  std::size_t start = 1;
  while (start <= t.path.size()) {
    const auto end = t.path.find('/', start);
    const auto piece = t.path.substr(start, end == std::string::npos ? end : end - start);
    if (!piece.empty()) t.segments.push_back(piece);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return t;
}

bool query_flag(const std::string& query, const std::string& key) {
  std::size_t start = 0;
  while (start <= query.size()) {
    const auto end = query.find('&', start);
    const std::string pair = query.substr(start, end == std::string::npos ? end : end - start);
    if (pair == key + "=1" || pair == key + "=true" || pair == key) return true;
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return false;
}

StringResponse text_response(const Request& req, http::status status, std::string body,
                             std::string_view type = "application/json") {
  StringResponse res{status, req.version()};
  res.set(http::field::content_type, beast::string_view(type.data(), type.size()));
  res.keep_alive(req.keep_alive());
  res.body() = std::move(body);
  res.prepare_payload();
  return res;
}

StringResponse json_response(const Request& req, const json& body,
                             http::status status = http::status::ok) {
  return text_response(req, status, body.dump());
}

StringResponse error_response(const Request& req, const Error& e) {
  http::status status = http::status::bad_request;
  if (e.code() == ErrorCode::kNotFound) status = http::status::not_found;
  if (e.code() == ErrorCode::kConflict) status = http::status::conflict;
  return json_response(
      req, {{"error", std::string(to_string(e.code()))}, {"message", e.what()}, {"field", e.field()}},
      status);
}

json parse_body(const Request& req) {
  try {
    return json::parse(req.body());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformed, std::string("request body is not JSON: ") + e.what(),
                "body");
  }
}

std::string_view mime_type(std::string_view path) {
  const auto dot = path.rfind('.');
  const std::string_view ext = dot == std::string_view::npos ? "" : path.substr(dot);
  if (ext == ".html" || ext == ".htm") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".wasm") return "application/wasm";
  return "application/octet-stream";
}

struct Core {
  explicit Core(ServiceConfig c)
      : config(std::move(c)), sessions(config.session_ttl, config.clock) {}

  ServiceConfig config;
  SessionManager sessions;
  asio::io_context ioc;
  tcp::acceptor acceptor{ioc};
  asio::steady_timer sweeper{ioc};
  std::vector<std::thread> threads;

  void accept();
  void sweep();
  void drive(const std::string& id, std::uint64_t generation);
  Response handle(const Request& req);
  StringResponse api(const Request& req, const Target& target);
  Response static_file(const Request& req, const Target& target);
};

class WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(tcp::socket&& socket, Core& server)
      : ws_(std::move(socket)), server_(server) {}

  void run(Request req) {
    const Target target = split_target(req.target());
    bool known = target.segments.size() == 3;
    if (known) {
      session_ = target.segments[2];
      try {
        std::weak_ptr<WsConnection> weak = weak_from_this();
        subscription_ = server_.sessions.subscribe(
            session_, query_flag(target.query, "cell"), [weak](const std::string& message) {
              if (auto self = weak.lock()) {
                asio::post(self->ws_.get_executor(), [self, message] {
                  self->queue_.push_back(message);
                  self->flush();
                });
              }
            });
      } catch (const Error&) {
        known = false;
      }
    }
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this(), known](beast::error_code ec) {
      if (ec) return self->drop();
      if (!known) {
        websocket::close_reason reason;
        reason.code = static_cast<websocket::close_code>(kUnknownSessionClose);
        reason.reason = "unknown session";
        self->closed_ = true;
        self->ws_.async_close(reason, [self](beast::error_code) {});
        return;
      }
      self->ready_ = true;
      self->flush();
      self->read();
    });
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t n) {
      if (ec) return self->drop();
      self->buffer_.consume(n);
      self->read();
    });
  }

  void flush() {
    if (!ready_ || writing_ || closed_ || queue_.empty()) return;
    writing_ = true;
    ws_.text(true);
    ws_.async_write(asio::buffer(queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      self->writing_ = false;
                      if (ec) return self->drop();
                      self->queue_.pop_front();
                      self->flush();
                    });
  }

  void drop() {
    if (closed_) return;
    closed_ = true;
    queue_.clear();
    if (subscription_) server_.sessions.unsubscribe(session_, *subscription_);
    subscription_.reset();
  }

  websocket::stream<beast::tcp_stream> ws_;
  Core& server_;
  std::string session_;
  std::optional<std::uint64_t> subscription_;
  std::deque<std::string> queue_;
  beast::flat_buffer buffer_;
  bool ready_ = false;
  bool writing_ = false;
  bool closed_ = false;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket&& socket, Core& server)
      : stream_(std::move(socket)), server_(server) {}

  void run() {
    asio::dispatch(stream_.get_executor(), [self = shared_from_this()] { self->read(); });
  }

 private:
  void read() {
    parser_.emplace();
    parser_->body_limit(64 * 1024 * 1024);
    stream_.expires_after(std::chrono::seconds(60));
    http::async_read(stream_, buffer_, *parser_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       self->on_read(ec);
                     });
  }

  void on_read(beast::error_code ec) {
    if (ec) return close();
    Request req = parser_->release();
    if (websocket::is_upgrade(req)) {
      const Target target = split_target(req.target());
      if (target.segments.size() >= 2 && target.segments[0] == "ws" &&
          target.segments[1] == "sessions") {
        stream_.expires_never();
        std::make_shared<WsConnection>(stream_.release_socket(), server_)->run(std::move(req));
        return;
      }
    }
    std::visit([this](auto&& res) { send(std::move(res)); }, server_.handle(req));
  }

  template <typename Body>
  void send(http::response<Body>&& res) {
    auto held = std::make_shared<http::response<Body>>(std::move(res));
    const bool close_after = held->need_eof();
    http::async_write(stream_, *held,
                      [self = shared_from_this(), held, close_after](beast::error_code ec,
                                                                     std::size_t) {
                        if (ec || close_after) return self->close();
                        self->read();
                      });
  }

  void close() {
    beast::error_code ignored;
    stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  std::optional<http::request_parser<http::string_body>> parser_;
  Core& server_;
};

}  // namespace

struct Server::Impl : Core {
  using Core::Core;
};

void Core::accept() {
  acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
    if (!ec) std::make_shared<HttpConnection>(std::move(socket), *this)->run();
    if (acceptor.is_open()) accept();
  });
}

void Core::sweep() {
  const auto period =
      std::clamp<std::chrono::seconds>(config.session_ttl / 4, std::chrono::seconds(1),
                                       std::chrono::seconds(30));
  sweeper.expires_after(period);
  sweeper.async_wait([this](beast::error_code ec) {
    if (ec) return;
    sessions.expire();
    sweep();
  });
}

void Core::drive(const std::string& id, std::uint64_t generation) {
  asio::post(ioc, [this, id, generation] {
    if (!sessions.pump(id, generation)) return;
    auto timer = std::make_shared<asio::steady_timer>(ioc, config.tick_interval);
    timer->async_wait([this, timer, id, generation](beast::error_code ec) {
      if (!ec) drive(id, generation);
    });
  });
}

Response Core::handle(const Request& req) {
  const Target target = split_target(req.target());
  if (!target.segments.empty() && target.segments[0] == "api") {
    try {
      return api(req, target);
    } catch (const Error& e) {
      return error_response(req, e);
    } catch (const std::exception& e) {
      return json_response(req, {{"error", "internal"}, {"message", e.what()}, {"field", ""}},
                           http::status::internal_server_error);
    }
  }
  return static_file(req, target);
}

StringResponse Core::api(const Request& req, const Target& target) {
  const auto& seg = target.segments;
  const auto method = req.method();
  auto wrong_method = [&] {
    return json_response(
        req, {{"error", "method_not_allowed"}, {"message", "method not allowed"}, {"field", ""}},
        http::status::method_not_allowed);
  };
  if (seg.size() < 2 || seg[1] != "sessions") {
    throw Error(ErrorCode::kNotFound, "no such endpoint", "path");
  }
  if (seg.size() == 2) {
    if (method != http::verb::post) return wrong_method();
    return json_response(req, {{"id", sessions.create()}});
  }
  const std::string& id = seg[2];
  if (seg.size() == 3) {
    if (method != http::verb::get) return wrong_method();
    return json_response(req, {{"id", id}, {"status", std::string(to_string(sessions.status(id)))}});
  }
  if (seg.size() != 4) throw Error(ErrorCode::kNotFound, "no such endpoint", "path");

  const std::string& action = seg[3];
  if (action == "scenario") {
    if (method == http::verb::get) {
      return text_response(req, http::status::ok, sessions.get_scenario(id));
    }
    if (method == http::verb::put) {
      if (!sessions.exists(id)) throw Error(ErrorCode::kNotFound, "unknown session", "session");
      sessions.put_scenario(id, req.body());
      return json_response(req, {{"ok", true}});
    }
    return wrong_method();
  }
  if (action == "edit") {
    if (method != http::verb::post) return wrong_method();
    if (!sessions.exists(id)) throw Error(ErrorCode::kNotFound, "unknown session", "session");
    const auto touched = sessions.edit(id, parse_body(req));
    json body = {{"ok", true}};
    if (touched) body["id"] = *touched;
    return json_response(req, body);
  }
  if (action == "control") {
    if (method != http::verb::post) return wrong_method();
    if (!sessions.exists(id)) throw Error(ErrorCode::kNotFound, "unknown session", "session");
    const ControlResult r = sessions.control(id, parse_body(req));
    if (r.started_generation) drive(id, *r.started_generation);
    json body = {{"status", std::string(to_string(r.status))},
                 {"t", r.next_tick},
                 {"finished", r.finished}};
    if (r.tick) body["tick"] = *r.tick;
    return json_response(req, body);
  }
  throw Error(ErrorCode::kNotFound, "no such endpoint", "path");
}

Response Core::static_file(const Request& req, const Target& target) {
  auto not_found = [&] {
    return text_response(req, http::status::not_found, "not found", "text/plain");
  };
  if (req.method() != http::verb::get && req.method() != http::verb::head) {
    return text_response(req, http::status::method_not_allowed, "method not allowed",
                         "text/plain");
  }
  if (config.static_dir.empty()) return not_found();
  for (const std::string& piece : target.segments) {
    if (piece == ".." || piece == ".") return not_found();
  }
  std::string path = config.static_dir + target.path;
  if (path.back() == '/') path += "index.html";

  beast::error_code ec;
  http::file_body::value_type body;
  body.open(path.c_str(), beast::file_mode::scan, ec);
  if (ec) {
    body.open((path + "/index.html").c_str(), beast::file_mode::scan, ec);
    if (ec) return not_found();
    path += "/index.html";
  }
  const auto size = body.size();
  FileResponse res{std::piecewise_construct, std::make_tuple(std::move(body)),
                   std::make_tuple(http::status::ok, req.version())};
  const std::string_view type = mime_type(path);
  res.set(http::field::content_type, beast::string_view(type.data(), type.size()));
  res.content_length(size);
  res.keep_alive(req.keep_alive());
  if (req.method() == http::verb::head) res.body().close();
  return res;
}

Server::Server(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Server::~Server() {
  stop();
  wait();
}

SessionManager& Server::sessions() { return impl_->sessions; }

unsigned short Server::start() {
  Impl& s = *impl_;
  const tcp::endpoint endpoint{asio::ip::make_address(s.config.address), s.config.port};
  s.acceptor.open(endpoint.protocol());
  s.acceptor.set_option(asio::socket_base::reuse_address(true));
  s.acceptor.bind(endpoint);
  s.acceptor.listen(asio::socket_base::max_listen_connections);
  s.accept();
  s.sweep();
  for (int i = 0; i < std::max(1, s.config.threads); ++i) {
    s.threads.emplace_back([&s] { s.ioc.run(); });
  }
  return s.acceptor.local_endpoint().port();
}

void Server::wait() {
  for (std::thread& t : impl_->threads) {
    if (t.joinable()) t.join();
  }
  impl_->threads.clear();
}

void Server::stop() { impl_->ioc.stop(); }

}  // namespace insq::service
