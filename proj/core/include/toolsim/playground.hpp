#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolsim/session.hpp"

namespace toolsim {

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// One server-sent event. Message events only reach streams of a role that
/// can see the message; every other event reaches all streams.
struct PlaygroundEvent {
  std::uint64_t id = 0;
  std::string type;  // "message", "snapshot", "evaluation" or "status"
  Json data;
  std::optional<RoleSet> visible_to;  // set for message events

  /// `id: ...\nevent: ...\ndata: ...\n\n`
  std::string to_sse() const;
};

/// Live sessions over a scenario suite, addressed through a small HTTP API:
///
///   GET  /scenarios                    list of scenarios
///   POST /sessions                     {scenario_id, role_config} -> {session_id}
///   GET  /sessions/{id}                status, per-role views, latest snapshot diff
///   POST /sessions/{id}/input          {role, text} or {role, tool_calls: [...]}
///   GET  /sessions/{id}/evaluation     MatchResult over the trajectory so far
///   GET  /sessions/{id}/events         server-sent events (?role=agent|user&after=N)
///   GET  /sessions/{id}/trajectory     trajectory file contents
///   POST /sessions/{id}/end            force the session to end
///
/// role_config maps "agent" and "user" to "human", "scripted[:<playbook>]"
/// or "llm:<config.json>"; by default a human plays the agent against the
/// golden scripted user. Every JSON body carries "schema_version".
class Playground {
 public:
  explicit Playground(std::vector<Scenario> scenarios);
  ~Playground();

  HttpResponse handle(const HttpRequest& request);

  /// Events of a session with id greater than `after` that `role` may see.
  /// Blocks up to `wait` for new events when there are none yet. Returns
  /// nullopt for an unknown session.
  struct EventBatch {
    std::vector<PlaygroundEvent> events;
    bool finished = false;  // the session has ended and nothing more will follow
    std::uint64_t last_id = 0;  // resume point, including events filtered out
  };
  std::optional<EventBatch> events(std::string_view session_id, Role role, std::uint64_t after,
                                   std::chrono::milliseconds wait = std::chrono::milliseconds{0});

  std::size_t session_count() const;

 private:
  struct Live;

  std::shared_ptr<Live> find(std::string_view id) const;
  HttpResponse list_scenarios() const;
  HttpResponse create_session(const HttpRequest& request);
  HttpResponse session_status(Live& live) const;
  HttpResponse submit_input(Live& live, const HttpRequest& request);
  HttpResponse evaluation(Live& live) const;
  HttpResponse event_stream(Live& live, const HttpRequest& request);
  HttpResponse trajectory(Live& live) const;
  HttpResponse end_session(Live& live);

  std::map<std::string, Scenario> scenarios_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Live>, std::less<>> sessions_;
  std::uint64_t next_session_ = 1;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string cors_origin = "*";
  /// Directory with the built UI to serve at "/", if any.
  std::string static_dir;
};

/// HTTP server in front of a Playground. Event streams are chunked
/// server-sent events that stay open until the session ends or the client
/// disconnects.
class PlaygroundServer {
 public:
  PlaygroundServer(Playground& playground, ServeOptions options);
  ~PlaygroundServer();

  /// Binds the configured address; port 0 picks a free port. Returns the
  /// bound port, or -1 on failure.
  int bind();
  /// Serves until stop() is called. Requires a successful bind().
  bool run();
  /// Safe to call from any thread.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Binds the playground to an HTTP server and blocks until it stops.
/// Returns false if the address could not be bound.
bool serve_playground(Playground& playground, const ServeOptions& options);

}  // namespace toolsim
