#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hidmap/session.hpp"

namespace httplib {
class Server;
}

namespace hidmap {

int http_status(ErrorCode code) noexcept;
nlohmann::json error_json(const Error& e);

// One session behind a lock. handle() is transport-free so the routing can be
// exercised without sockets.
class SessionService {
 public:
  struct Response {
    int status = 200;
    nlohmann::json body;
  };

  SessionService(SessionState initial, LayoutConfig cfg = {}, std::ostream* log = nullptr);

  Response handle(std::string_view method, std::string_view path, std::string_view body);
  LayoutDocument current() const;

 private:
  Response dispatch(std::string_view method, std::string_view path, std::string_view body);
  Response apply(SessionState next);
  DimIndex parse_dimension(const nlohmann::json& v) const;

  mutable std::mutex mutex_;
  LayoutConfig cfg_;
  SessionState state_;
  LayoutDocument doc_;
  std::ostream* log_;
};

class HttpServer {
 public:
  // `ui_dir` replaces the built-in placeholder page when given.
  HttpServer(SessionService& service, std::optional<std::string> ui_dir = std::nullopt);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Returns the bound port (port 0 picks a free one). Throws Error(PortInUse) when the port is taken.
  int bind(const std::string& host, int port);
  void run();   // blocks until stop()
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace hidmap
