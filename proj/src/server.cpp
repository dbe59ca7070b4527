#include "hidmap/server.hpp"

#include <charconv>
#include <filesystem>

#include <httplib.h>

namespace hidmap {

namespace {

constexpr std::string_view kPlaceholderPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>hidmap</title></head>
<body style="font-family:sans-serif">
<p>The interactive client is not bundled with this build. The session API is live:</p>
<ul>
<li><a href="/api/layout">GET /api/layout</a></li>
<li>POST /api/reorder, /api/hide, /api/drill, /api/back</li>
<li>GET /api/detail/{nodeId}</li>
</ul>
<p>Start the server with <code>--ui-dir</code> to serve a client build.</p>
</body></html>
)";

SessionService::Response error_response(const Error& e) {
  return {http_status(e.code()), error_json(e)};
}

SessionService::Response plain_error(int status, std::string_view code, std::string message) {
  return {status, {{"error", code}, {"message", std::move(message)}}};
}

std::uint64_t parse_node_id(std::string_view text) {
  std::uint64_t id = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::BadRequest, "node id must be a non-negative integer");
  }
  return id;
}

std::uint64_t node_id_field(const nlohmann::json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_string()) return parse_node_id(v.get<std::string>());
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  throw Error(ErrorCode::BadRequest, "nodeId must be a non-negative integer");
}

std::size_t position_field(const nlohmann::json& body, const char* key) {
  if (!body.contains(key)) throw Error(ErrorCode::BadRequest, std::string("missing field '") + key + "'");
  const auto& v = body[key];
  if (!v.is_number_integer()) throw Error(ErrorCode::BadRequest, std::string("'") + key + "' must be an integer");
  if (v.get<std::int64_t>() < 0) throw Error(ErrorCode::InvalidPosition, std::string("'") + key + "' is negative");
  return v.get<std::size_t>();
}

}  // namespace

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownNode: return 404;
    case ErrorCode::LastVisibleDimension:
    case ErrorCode::EmptyStack:
    case ErrorCode::EmptySelection: return 409;
    case ErrorCode::IoError:
    case ErrorCode::PortInUse: return 500;
    default: return 400;
  }
}

nlohmann::json error_json(const Error& e) {
  return {{"error", error_code_name(e.code())}, {"message", e.what()}};
}

SessionService::SessionService(SessionState initial, LayoutConfig cfg, std::ostream* log)
    : cfg_(cfg), state_(std::move(initial)), log_(log) {
  state_.validate();
  doc_ = document(state_, cfg_);
}

LayoutDocument SessionService::current() const {
  std::lock_guard lock(mutex_);
  return doc_;
}

SessionService::Response SessionService::handle(std::string_view method, std::string_view path,
                                                std::string_view body) {
  std::lock_guard lock(mutex_);
  Response r;
  try {
    r = dispatch(method, path, body);
  } catch (const Error& e) {
    r = error_response(e);
  } catch (const nlohmann::json::exception& e) {
    r = plain_error(400, "BadRequest", e.what());
  }
  if (r.status != 200 && !r.body.contains("revision")) r.body["revision"] = state_.revision;
  if (log_ && method == "POST") {
    *log_ << method << ' ' << path << ' ' << r.status << " revision=" << state_.revision;
    if (r.status != 200) *log_ << " error=" << r.body.value("error", "");
    *log_ << '\n' << std::flush;
  }
  return r;
}

SessionService::Response SessionService::apply(SessionState next) {
  next.validate();
  LayoutDocument after = document(next, cfg_);
  const TransitionPlan plan = transition(doc_, after);
  state_ = std::move(next);
  doc_ = std::move(after);
  return {200, {{"document", to_json(doc_)}, {"transition", to_json(plan)}}};
}

DimIndex SessionService::parse_dimension(const nlohmann::json& v) const {
  const Dataset& ds = *state_.dataset;
  if (v.is_string()) {
    try {
      return ds.dimension_index(v.get<std::string>());
    } catch (const Error&) {
      throw Error(ErrorCode::InvalidDimension, "no dimension named '" + v.get<std::string>() + "'");
    }
  }
  if (v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i < 0 || static_cast<std::size_t>(i) >= ds.dimension_count()) {
      throw Error(ErrorCode::InvalidDimension, "dimension index " + std::to_string(i) + " out of range");
    }
    return static_cast<DimIndex>(i);
  }
  throw Error(ErrorCode::BadRequest, "'dim' must be a name or an index");
}

SessionService::Response SessionService::dispatch(std::string_view method, std::string_view path,
                                                  std::string_view body) {
  constexpr std::string_view detail_prefix = "/api/detail/";
  if (method == "GET") {
    if (path == "/api/layout") return {200, to_json(doc_)};
    if (path.starts_with(detail_prefix)) {
      return {200, summary_json(doc_, parse_node_id(path.substr(detail_prefix.size())))};
    }
    return plain_error(404, "NotFound", "no route " + std::string(path));
  }
  if (method != "POST") return plain_error(405, "MethodNotAllowed", "use GET or POST");

  nlohmann::json req = body.empty() ? nlohmann::json::object() : nlohmann::json::parse(body);
  if (!req.is_object()) throw Error(ErrorCode::BadRequest, "request body must be a JSON object");

  if (path == "/api/reorder") {
    return apply(reorder(state_, position_field(req, "from"), position_field(req, "to")));
  }
  if (path == "/api/hide") {
    if (!req.contains("dim")) throw Error(ErrorCode::BadRequest, "missing field 'dim'");
    const DimIndex dim = parse_dimension(req["dim"]);
    bool hidden = !state_.is_hidden(dim);
    if (req.contains("hidden")) {
      if (!req["hidden"].is_boolean()) throw Error(ErrorCode::BadRequest, "'hidden' must be a boolean");
      hidden = req["hidden"].get<bool>();
    }
    return apply(set_hidden(state_, dim, hidden));
  }
  if (path == "/api/drill") {
    if (!req.contains("nodeId")) throw Error(ErrorCode::BadRequest, "missing field 'nodeId'");
    return apply(drill(state_, doc_.tree, node_id_field(req["nodeId"])));
  }
  if (path == "/api/back") return apply(back(state_));
  return plain_error(404, "NotFound", "no route " + std::string(path));
}

HttpServer::HttpServer(SessionService& service, std::optional<std::string> ui_dir)
    : server_(std::make_unique<httplib::Server>()) {
  // httplib's default also sets SO_REUSEPORT, which lets a second server share a busy port.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    const auto r = service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server_->Get(R"(/api/.*)", forward);
  server_->Post(R"(/api/.*)", forward);
  server_->Put(R"(/api/.*)", forward);
  server_->Patch(R"(/api/.*)", forward);
  server_->Delete(R"(/api/.*)", forward);

  if (ui_dir && std::filesystem::is_directory(*ui_dir)) {
    server_->set_mount_point("/", *ui_dir);
  } else {
    server_->Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(std::string(kPlaceholderPage), "text/html; charset=utf-8");
    });
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::PortInUse, "no free port on " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorCode::PortInUse, "port " + std::to_string(port) + " is in use");
  }
  return port;
}

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

}  // namespace hidmap
