#include "hidmap/cli.hpp"

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <pthread.h>

#include <CLI11.hpp>

#include "hidmap/dataset.hpp"
#include "hidmap/render.hpp"
#include "hidmap/server.hpp"
#include "hidmap/session.hpp"

namespace hidmap::cli {

namespace {

struct Options {
  std::string input;
  std::vector<std::string> order;
  std::vector<std::string> hide;
  std::vector<std::string> drill;
  std::uint64_t seed = 0;
  bool no_marbles = false;
  std::string out = "-";
  std::string viewport = "1000x1000";
  bool no_labels = false;
  std::optional<std::uint64_t> detail;
  int port = kDefaultPort;
  std::string host = "127.0.0.1";
  std::string ui_dir;
};

// A failure with its exit code already decided.
struct Exit {
  int code;
  std::string message;
};

int default_port() {
  if (const char* env = std::getenv("HIDMAP_PORT")) {
    try {
      const int p = std::stoi(env);
      if (p > 0 && p < 65536) return p;
    } catch (const std::exception&) {
    }
  }
  return kDefaultPort;
}

std::shared_ptr<const Dataset> load(const std::string& path) {
  try {
    return std::make_shared<const Dataset>(load_csv(path));
  } catch (const Error& e) {
    throw Exit{kExitDataError, path + ": " + e.what()};
  }
}

DimIndex dimension_flag(const Dataset& ds, const std::string& flag, const std::string& name) {
  try {
    return ds.dimension_index(name);
  } catch (const Error&) {
    throw Exit{kExitBadFlags, flag + ": unknown dimension '" + name + "'"};
  }
}

// Listed dimensions first, then the rest in file order; hidden sorted; the
// drill path as a single step. This is the state a session reaches through
// the equivalent commands.
SessionState state_from_flags(std::shared_ptr<const Dataset> ds, const Options& o) {
  SessionState s;
  s.dataset = ds;
  s.seed = o.seed;
  std::vector<bool> listed(ds->dimension_count(), false);
  for (const auto& name : o.order) {
    const DimIndex d = dimension_flag(*ds, "--order", name);
    if (listed[d]) throw Exit{kExitBadFlags, "--order: dimension '" + name + "' listed twice"};
    listed[d] = true;
    s.side_order.push_back(d);
  }
  for (DimIndex d = 0; d < ds->dimension_count(); ++d) {
    if (!listed[d]) s.side_order.push_back(d);
  }
  for (const auto& name : o.hide) {
    const DimIndex d = dimension_flag(*ds, "--hide", name);
    if (!s.is_hidden(d)) s.hidden.insert(std::upper_bound(s.hidden.begin(), s.hidden.end(), d), d);
  }
  if (!o.drill.empty()) {
    try {
      s.drill_stack.push_back(parse_path(*ds, o.drill));
    } catch (const Error& e) {
      throw Exit{kExitBadFlags, std::string("--drill: ") + e.what()};
    }
  }
  try {
    s.validate();
  } catch (const Error& e) {
    throw Exit{kExitBadFlags, e.what()};
  }
  if (!s.drill_stack.empty() && filter_count(*ds, s.drill_path()) == 0) {
    throw Exit{kExitDataError, "--drill: the selected subset has no rows"};
  }
  return s;
}

LayoutConfig layout_config(const Options& o) {
  LayoutConfig cfg;
  cfg.seed = o.seed;
  cfg.with_marbles = !o.no_marbles;
  return cfg;
}

RenderOptions render_options(const Options& o) {
  RenderOptions r;
  const auto x = o.viewport.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument("no separator");
    std::size_t used = 0;
    r.width = std::stoi(o.viewport.substr(0, x), &used);
    if (used != x) throw std::invalid_argument("width");
    const std::string h = o.viewport.substr(x + 1);
    r.height = std::stoi(h, &used);
    if (used != h.size()) throw std::invalid_argument("height");
  } catch (const std::exception&) {
    throw Exit{kExitBadFlags, "--viewport: expected WIDTHxHEIGHT, got '" + o.viewport + "'"};
  }
  if (r.width < 100 || r.height < 100) throw Exit{kExitBadFlags, "--viewport: minimum is 100x100"};
  r.show_marbles = !o.no_marbles;
  r.show_labels = !o.no_labels;
  r.detail_node = o.detail;
  return r;
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Exit{kExitDataError, "cannot write '" + path + "'"};
}

LayoutDocument build_document(const SessionState& s, const LayoutConfig& cfg) {
  try {
    return document(s, cfg);
  } catch (const Error& e) {
    throw Exit{kExitDataError, e.what()};
  }
}

int cmd_render(const Options& o, std::ostream& out) {
  const auto ds = load(o.input);
  const SessionState s = state_from_flags(ds, o);
  const RenderOptions ropts = render_options(o);
  const LayoutDocument doc = build_document(s, layout_config(o));
  if (ropts.detail_node && !doc.tree.find(*ropts.detail_node)) {
    throw Exit{kExitBadFlags, "--detail: no node with id " + std::to_string(*ropts.detail_node)};
  }
  std::string svg;
  try {
    svg = to_svg(doc.tree, *ds, ropts);
  } catch (const Error& e) {
    throw Exit{kExitDataError, e.what()};
  }
  write_output(o.out, svg, out);
  return kExitOk;
}

int cmd_layout(const Options& o, std::ostream& out) {
  const auto ds = load(o.input);
  const SessionState s = state_from_flags(ds, o);
  write_output(o.out, to_json(build_document(s, layout_config(o))).dump(1) + "\n", out);
  return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& err) {
  const auto ds = load(o.input);
  SessionService service(state_from_flags(ds, o), layout_config(o), &err);
  HttpServer server(service, o.ui_dir.empty() ? std::nullopt : std::optional(o.ui_dir));
  int port = 0;
  try {
    port = server.bind(o.host, o.port);
  } catch (const Error& e) {
    throw Exit{kExitPortInUse, e.what()};
  }
  err << "hidmap: serving " << o.input << " on http://" << o.host << ':' << port << "/\n" << std::flush;

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGUSR1);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.run();
  pthread_kill(waiter.native_handle(), SIGUSR1);
  waiter.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  err << "hidmap: stopped\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Area-proportional polygon maps for multi-dimensional categorical data", "hidmap"};
  app.require_subcommand(1);
  Options o;
  o.port = default_port();

  auto common = [&o](CLI::App* sub) {
    sub->add_option("-i,--input", o.input, "CSV file: header of dimension names, one row per item")->required();
    sub->add_option("--order", o.order, "Dimension order, comma separated; unlisted ones follow in file order")
        ->delimiter(',');
    sub->add_option("--hide", o.hide, "Dimensions to hide, comma separated")->delimiter(',');
    sub->add_option("--drill", o.drill, "Drill path as name=value pairs, comma separated")->delimiter(',');
    sub->add_option("--seed", o.seed, "Marble placement seed")->capture_default_str();
    sub->add_flag("--no-marbles", o.no_marbles, "Skip marble placement");
  };

  auto* render = app.add_subcommand("render", "Write the map as SVG");
  common(render);
  render->add_option("-o,--out", o.out, "Output file, - for stdout")->capture_default_str();
  render->add_option("--viewport", o.viewport, "WIDTHxHEIGHT in px")->capture_default_str();
  render->add_option("--detail", o.detail, "Node id to magnify in a second panel");
  render->add_flag("--no-labels", o.no_labels, "Omit text labels");

  auto* layout = app.add_subcommand("layout", "Write the layout document as JSON");
  common(layout);
  layout->add_option("-o,--out", o.out, "Output file, - for stdout")->capture_default_str();

  auto* serve = app.add_subcommand("serve", "Serve the session API and the client");
  common(serve);
  serve->add_option("--port", o.port, "TCP port (default from HIDMAP_PORT, else 8080)")
      ->check(CLI::Range(0, 65535));
  serve->add_option("--host", o.host, "Address to bind")->capture_default_str();
  serve->add_option("--ui-dir", o.ui_dir, "Directory of client assets served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadFlags;
  }

  try {
    if (*render) return cmd_render(o, out);
    if (*layout) return cmd_layout(o, out);
    return cmd_serve(o, err);
  } catch (const Exit& e) {
    err << "hidmap: error: " << e.message << '\n';
    return e.code;
  } catch (const Error& e) {
    err << "hidmap: error: " << e.what() << '\n';
    return kExitDataError;
  }
}

}  // namespace hidmap::cli
