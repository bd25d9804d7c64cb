#include "toolsim/playground.hpp"

#include <algorithm>
#include <condition_variable>
#include <sstream>

#include "toolsim/bus.hpp"
#include "toolsim/evaluation.hpp"
#include "toolsim/runner.hpp"

namespace toolsim {

namespace {

constexpr int kApiSchemaVersion = 1;

HttpResponse json_response(int status, Json body) {
  body["schema_version"] = kApiSchemaVersion;
  return HttpResponse{status, "application/json", body.dump()};
}

HttpResponse error_response(int status, std::string kind, std::string message) {
  return json_response(status, Json{{"error", {{"kind", std::move(kind)}, {"message", std::move(message)}}}});
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto slash = path.find('/', start);
    const auto end = slash == std::string_view::npos ? path.size() : slash;
    if (end > start) parts.emplace_back(path.substr(start, end - start));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return parts;
}

Json state_json(const WorldState& state) {
  Json j = Snapshot{0, state, Message{}};
  j.erase("turn_index");
  j.erase("message");
  return j;
}

Json messages_json(std::span<const Message> messages) {
  Json out = Json::array();
  for (const auto& m : messages) out.push_back(m);
  return out;
}

}  // namespace

std::string PlaygroundEvent::to_sse() const {
  return "id: " + std::to_string(id) + "\nevent: " + type + "\ndata: " + data.dump() + "\n\n";
}

struct Playground::Live {
  std::string id;
  std::mutex mutex;
  std::condition_variable changed;
  std::unique_ptr<Session> session;
  std::map<Role, std::shared_ptr<HumanBridgeAdapter>> humans;
  std::map<Role, std::string> occupancy;
  std::vector<PlaygroundEvent> events;
  Json previous_state;
  Json last_diff = Json::array();
  Json last_status;

  void push(std::string type, Json data, std::optional<RoleSet> visible_to = std::nullopt) {
    PlaygroundEvent e;
    e.id = events.size() + 1;
    e.type = std::move(type);
    e.data = std::move(data);
    e.visible_to = visible_to;
    events.push_back(std::move(e));
  }

  void on_snapshot(const Snapshot& snapshot) {
    Json current = state_json(snapshot.state);
    last_diff = Json::diff(previous_state, current);
    previous_state = std::move(current);
    push("message", Json{{"turn", snapshot.turn_index}, {"message", snapshot.message}}, snapshot.message.visible_to);
    push("snapshot", Json{{"turn", snapshot.turn_index}, {"diff", last_diff}});
    push("evaluation", Json{{"turn", snapshot.turn_index}, {"evaluation", current_evaluation()}});
  }

  MatchResult current_evaluation() const {
    const auto& scenario = session->scenario();
    return evaluate(scenario.milestones, scenario.minefields, session->snapshots());
  }

  Json status() const {
    if (session->ended()) {
      return Json{{"state", "ended"},
                  {"reason", std::string(to_string(session->termination()))},
                  {"detail", session->detail()}};
    }
    if (auto role = session->awaiting()) return Json{{"state", "awaiting"}, {"role", *role}};
    return Json{{"state", "running"}};
  }

  /// Drives the session until a human must act or it ends, then publishes
  /// the status if it changed.
  void advance() {
    session->run();
    Json now = status();
    if (now != last_status) {
      last_status = now;
      push("status", now);
    }
    changed.notify_all();
  }

  Role default_stream_role() const {
    for (const auto& [role, adapter] : humans) return role;
    return Role::Agent;
  }
};

Playground::Playground(std::vector<Scenario> scenarios) {
  for (auto& s : scenarios) {
    auto id = s.id;
    scenarios_.emplace(std::move(id), std::move(s));
  }
}

Playground::~Playground() = default;

std::size_t Playground::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::shared_ptr<Playground::Live> Playground::find(std::string_view id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

HttpResponse Playground::handle(const HttpRequest& request) {
  const auto parts = split_path(request.path);
  const auto& method = request.method;
  if (parts.size() == 1 && parts[0] == "scenarios" && method == "GET") return list_scenarios();
  if (parts.size() == 1 && parts[0] == "sessions" && method == "POST") return create_session(request);
  if (parts.size() < 2 || parts.size() > 3 || parts[0] != "sessions") {
    return error_response(404, "NotFound", "no route for " + method + " " + request.path);
  }

  auto live = find(parts[1]);
  if (!live) return error_response(404, "UnknownSession", "no session '" + parts[1] + "'");
  const std::string action = parts.size() == 3 ? parts[2] : "";
  if (action.empty() && method == "GET") return session_status(*live);
  if (action == "input" && method == "POST") return submit_input(*live, request);
  if (action == "evaluation" && method == "GET") return evaluation(*live);
  if (action == "events" && method == "GET") return event_stream(*live, request);
  if (action == "trajectory" && method == "GET") return trajectory(*live);
  if (action == "end" && method == "POST") return end_session(*live);
  return error_response(404, "NotFound", "no route for " + method + " " + request.path);
}

HttpResponse Playground::list_scenarios() const {
  Json list = Json::array();
  for (const auto& [id, s] : scenarios_) {
    Json categories = Json::array();
    for (Category c : s.categories) categories.push_back(std::string(to_string(c)));
    Json playbooks = Json::array();
    for (const auto& [name, p] : s.playbooks) playbooks.push_back(name);
    list.push_back(Json{{"id", id},
                        {"description", s.description},
                        {"categories", categories},
                        {"augmentations", augmentation_labels(s.augmentation)},
                        {"milestone_count", s.milestones.nodes.size()},
                        {"playbooks", playbooks}});
  }
  return json_response(200, Json{{"scenarios", list}});
}

HttpResponse Playground::create_session(const HttpRequest& request) {
  Json body;
  try {
    body = Json::parse(request.body.empty() ? std::string("{}") : request.body);
  } catch (const Json::exception& e) {
    return error_response(400, "BadRequest", std::string("invalid JSON: ") + e.what());
  }
  if (!body.is_object() || !body.contains("scenario_id") || !body["scenario_id"].is_string()) {
    return error_response(400, "BadRequest", "body needs a string 'scenario_id'");
  }
  const auto scenario_id = body["scenario_id"].get<std::string>();
  auto scenario_it = scenarios_.find(scenario_id);
  if (scenario_it == scenarios_.end()) {
    return error_response(404, "UnknownScenario", "no scenario '" + scenario_id + "'");
  }
  const Scenario& scenario = scenario_it->second;

  auto live = std::make_shared<Live>();
  std::map<Role, std::shared_ptr<RoleAdapter>> adapters;
  const Json role_config = body.value("role_config", Json::object());
  for (auto [role, key, fallback] : {std::tuple{Role::Agent, "agent", "human"}, std::tuple{Role::User, "user", "scripted"}}) {
    const std::string spec = role_config.is_object() ? role_config.value(key, std::string(fallback)) : fallback;
    try {
      if (spec == "human") {
        auto human = std::make_shared<HumanBridgeAdapter>(std::string(key));
        live->humans[role] = human;
        adapters[role] = human;
      } else {
        adapters[role] = std::shared_ptr<RoleAdapter>(make_adapter(parse_adapter_spec(spec), role, scenario));
      }
    } catch (const std::exception& e) {
      return error_response(400, "BadRoleConfig", std::string(key) + ": " + e.what());
    }
    live->occupancy[role] = spec;
  }

  {
    std::lock_guard lock(mutex_);
    live->id = "s" + std::to_string(next_session_++);
  }
  std::lock_guard live_lock(live->mutex);
  live->session = std::make_unique<Session>(scenario, adapters[Role::Agent], adapters[Role::User]);
  live->previous_state = state_json(scenario.initial_state);
  for (const auto& snapshot : live->session->snapshots()) live->on_snapshot(snapshot);
  live->session->set_listener([raw = live.get()](const Snapshot& s) { raw->on_snapshot(s); });
  live->advance();
  {
    std::lock_guard lock(mutex_);
    sessions_.emplace(live->id, live);
  }
  return json_response(201, Json{{"session_id", live->id}, {"status", live->status()}});
}

HttpResponse Playground::session_status(Live& live) const {
  std::lock_guard lock(live.mutex);
  const auto& session = *live.session;
  Json occupancy = Json::object();
  for (const auto& [role, spec] : live.occupancy) occupancy[std::string(to_string(role))] = spec;
  const auto& messages = session.bus().messages();
  Json tools = Json::object();
  tools["agent"] = session.toolset().rendered();
  Json user_tools = Json::array();
  if (const auto* end = Catalog::standard().find(kEndConversation)) user_tools.push_back(render_schema(end->schema));
  tools["user"] = user_tools;
  return json_response(200, Json{{"session_id", live.id},
                                 {"scenario_id", session.scenario().id},
                                 {"status", live.status()},
                                 {"roles", occupancy},
                                 {"turn_count", turn_count(messages)},
                                 {"max_turns", session.max_turns()},
                                 {"views",
                                  {{"agent", messages_json(view_for(messages, Role::Agent))},
                                   {"user", messages_json(view_for(messages, Role::User))}}},
                                 {"tools", tools},
                                 {"latest_diff", live.last_diff}});
}

HttpResponse Playground::submit_input(Live& live, const HttpRequest& request) {
  Json body;
  try {
    body = Json::parse(request.body);
  } catch (const Json::exception& e) {
    return error_response(400, "BadRequest", std::string("invalid JSON: ") + e.what());
  }
  Role role;
  ScriptStep step;
  try {
    role = parse_role(body.at("role").get<std::string>());
    step = body.get<ScriptStep>();
  } catch (const std::exception& e) {
    return error_response(400, "BadRequest",
                          std::string("body needs 'role' and either 'text' or 'tool_calls': ") + e.what());
  }

  std::lock_guard lock(live.mutex);
  auto& session = *live.session;
  auto human = live.humans.find(role);
  if (session.ended() || session.awaiting() != role || human == live.humans.end()) {
    return error_response(409, "NotAwaited", "the session is not waiting for input from " + std::string(to_string(role)));
  }
  if (const auto* batch = std::get_if<ToolCallBatch>(&step)) {
    for (std::size_t i = 0; i < batch->size(); ++i) {
      if (auto failure = session.check_call(role, (*batch)[i])) {
        return json_response(422, Json{{"error",
                                        {{"kind", failure->error_kind},
                                         {"message", describe_outcome(*failure)},
                                         {"call_index", i}}}});
      }
    }
  }
  human->second->submit(std::move(step));
  live.advance();
  return json_response(200, Json{{"session_id", live.id}, {"status", live.status()}});
}

HttpResponse Playground::evaluation(Live& live) const {
  std::lock_guard lock(live.mutex);
  const auto& messages = live.session->bus().messages();
  return json_response(200, Json{{"session_id", live.id},
                                 {"final", live.session->ended()},
                                 {"turn_count", turn_count(messages)},
                                 {"evaluation", live.current_evaluation()}});
}

HttpResponse Playground::event_stream(Live& live, const HttpRequest& request) {
  Role role;
  std::uint64_t after = 0;
  try {
    if (auto it = request.query.find("role"); it != request.query.end()) {
      role = parse_role(it->second);
    } else {
      std::lock_guard lock(live.mutex);
      role = live.default_stream_role();
    }
    if (auto it = request.query.find("after"); it != request.query.end()) after = std::stoull(it->second);
  } catch (const std::exception& e) {
    return error_response(400, "BadRequest", e.what());
  }
  auto batch = events(live.id, role, after);
  std::string body;
  for (const auto& e : batch->events) body += e.to_sse();
  return HttpResponse{200, "text/event-stream", std::move(body)};
}

std::optional<Playground::EventBatch> Playground::events(std::string_view session_id, Role role, std::uint64_t after,
                                                         std::chrono::milliseconds wait) {
  auto live = find(session_id);
  if (!live) return std::nullopt;
  std::unique_lock lock(live->mutex);
  auto has_news = [&] { return live->events.size() > after || live->session->ended(); };
  if (wait.count() > 0) live->changed.wait_for(lock, wait, has_news);
  EventBatch batch;
  for (std::size_t i = after; i < live->events.size(); ++i) {
    const auto& e = live->events[i];
    if (e.visible_to && !e.visible_to->contains(role)) continue;
    batch.events.push_back(e);
  }
  batch.finished = live->session->ended();
  batch.last_id = std::max<std::uint64_t>(after, live->events.size());
  return batch;
}

HttpResponse Playground::trajectory(Live& live) const {
  std::lock_guard lock(live.mutex);
  std::ostringstream out;
  write_trajectory(out, live.session->trajectory());
  return HttpResponse{200, "application/x-ndjson", out.str()};
}

HttpResponse Playground::end_session(Live& live) {
  std::lock_guard lock(live.mutex);
  live.session->force_end("ended from the playground");
  live.advance();
  return json_response(200, Json{{"session_id", live.id}, {"status", live.status()}});
}

}  // namespace toolsim
