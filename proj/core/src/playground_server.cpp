// HTTP binding for the playground. Everything except the event stream goes
// through Playground::handle.

#include <httplib.h>

#include "toolsim/playground.hpp"

namespace toolsim {

namespace {

HttpRequest convert(const httplib::Request& req) {
  HttpRequest out;
  out.method = req.method;
  out.path = req.path;
  for (const auto& [key, value] : req.params) out.query.emplace(key, value);
  out.body = req.body;
  return out;
}

void reply(httplib::Response& res, const HttpResponse& response) {
  res.status = response.status;
  res.set_content(response.body, response.content_type);
}

}  // namespace

struct PlaygroundServer::Impl {
  httplib::Server server;
  ServeOptions options;
};

PlaygroundServer::PlaygroundServer(Playground& playground, ServeOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  auto& server = impl_->server;
  const auto& opts = impl_->options;
  server.set_default_headers({{"Access-Control-Allow-Origin", opts.cors_origin},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type, Last-Event-ID"}});
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Get(R"(/sessions/([^/]+)/events)", [&playground](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    Role role = Role::Agent;
    std::uint64_t after = 0;
    try {
      if (req.has_param("role")) role = parse_role(req.get_param_value("role"));
      if (req.has_param("after")) after = std::stoull(req.get_param_value("after"));
      if (req.has_header("Last-Event-ID")) after = std::stoull(req.get_header_value("Last-Event-ID"));
    } catch (const std::exception&) {
      reply(res, playground.handle(convert(req)));
      return;
    }
    if (!playground.events(id, role, after)) {
      reply(res, playground.handle(convert(req)));
      return;
    }
    auto cursor = std::make_shared<std::uint64_t>(after);
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream", [&playground, id, role, cursor](std::size_t, httplib::DataSink& sink) {
          auto batch = playground.events(id, role, *cursor, std::chrono::seconds{1});
          if (!batch) {
            sink.done();
            return true;
          }
          for (const auto& e : batch->events) {
            const auto text = e.to_sse();
            if (!sink.write(text.data(), text.size())) return false;
          }
          *cursor = batch->last_id;
          if (batch->events.empty()) {
            static constexpr char kKeepAlive[] = ": keep-alive\n\n";
            if (!sink.write(kKeepAlive, sizeof kKeepAlive - 1)) return false;
          }
          if (batch->finished) sink.done();
          return true;
        });
  });

  auto route = [&playground](const httplib::Request& req, httplib::Response& res) {
    reply(res, playground.handle(convert(req)));
  };
  if (!opts.static_dir.empty()) server.set_mount_point("/", opts.static_dir);
  server.Get(R"(/scenarios|/sessions/.*)", route);
  server.Post(R"(/sessions(/.*)?)", route);
}

PlaygroundServer::~PlaygroundServer() { stop(); }

int PlaygroundServer::bind() {
  const auto& opts = impl_->options;
  if (opts.port == 0) return impl_->server.bind_to_any_port(opts.host);
  return impl_->server.bind_to_port(opts.host, opts.port) ? opts.port : -1;
}

bool PlaygroundServer::run() { return impl_->server.listen_after_bind(); }

void PlaygroundServer::stop() { impl_->server.stop(); }

bool serve_playground(Playground& playground, const ServeOptions& options) {
  PlaygroundServer server(playground, options);
  return server.bind() >= 0 && server.run();
}

}  // namespace toolsim
