#include "toolsim/message.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace toolsim {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::User:
      return "user";
    case Role::Agent:
      return "agent";
    case Role::ExecutionEnvironment:
      return "execution_environment";
  }
  return "unknown";
}

Role parse_role(std::string_view text) {
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lowered == "user") return Role::User;
  if (lowered == "agent" || lowered == "assistant") return Role::Agent;
  if (lowered == "execution_environment" || lowered == "env" || lowered == "executionenvironment")
    return Role::ExecutionEnvironment;
  throw std::invalid_argument("unknown role '" + std::string(text) + "'");
}

std::string describe_outcome(const ToolOutcome& outcome) {
  if (!outcome.ok) return outcome.error_kind + ": " + outcome.error_message;
  if (outcome.value.is_string()) return outcome.value.get<std::string>();
  return outcome.value.dump();
}

void to_json(Json& j, Role r) { j = std::string(to_string(r)); }

void from_json(const Json& j, Role& r) { r = parse_role(j.get<std::string>()); }

void to_json(Json& j, const RoleSet& s) {
  j = Json::array();
  for (Role r : kAllRoles) {
    if (s.contains(r)) j.push_back(std::string(to_string(r)));
  }
}

void from_json(const Json& j, RoleSet& s) {
  s = RoleSet{};
  for (const auto& item : j) s.insert(parse_role(item.get<std::string>()));
}

void to_json(Json& j, const ToolCallRequest& c) {
  j = Json{{"call_id", c.call_id},
           {"name", c.tool_name},
           {"arguments", c.arguments},
           {"batch_position", c.batch_position}};
}

void from_json(const Json& j, ToolCallRequest& c) {
  c.call_id = j.value("call_id", std::string{});
  c.tool_name = j.at("name").get<std::string>();
  c.arguments = j.value("arguments", Json::object());
  c.batch_position = j.value("batch_position", 0);
}

void to_json(Json& j, const ToolOutcome& o) {
  if (o.ok) {
    j = Json{{"ok", true}, {"result", o.value}};
  } else {
    j = Json{{"ok", false}, {"error", {{"kind", o.error_kind}, {"message", o.error_message}}}};
  }
}

void from_json(const Json& j, ToolOutcome& o) {
  o.ok = j.at("ok").get<bool>();
  if (o.ok) {
    o.value = j.value("result", Json(nullptr));
    o.error_kind.clear();
    o.error_message.clear();
  } else {
    o.value = nullptr;
    o.error_kind = j.at("error").at("kind").get<std::string>();
    o.error_message = j.at("error").at("message").get<std::string>();
  }
}

void to_json(Json& j, const ToolResult& r) {
  j = r.outcome;
  j["call_id"] = r.call_id;
  j["name"] = r.tool_name;
}

void from_json(const Json& j, ToolResult& r) {
  r.call_id = j.value("call_id", std::string{});
  r.tool_name = j.at("name").get<std::string>();
  r.outcome = j.get<ToolOutcome>();
}

void to_json(Json& j, const Message& m) {
  Json content;
  if (const auto* text = m.text()) {
    content = Json{{"type", "text"}, {"text", *text}};
  } else if (const auto* calls = m.tool_calls()) {
    content = Json{{"type", "tool_calls"}, {"calls", *calls}};
  } else {
    content = Json{{"type", "tool_results"}, {"results", *m.tool_results()}};
  }
  j = Json{{"turn_index", m.turn_index},
           {"sender", m.sender},
           {"recipient", m.recipient},
           {"visible_to", m.visible_to},
           {"content", std::move(content)}};
}

void from_json(const Json& j, Message& m) {
  m.turn_index = j.at("turn_index").get<int>();
  m.sender = j.at("sender").get<Role>();
  m.recipient = j.at("recipient").get<Role>();
  m.visible_to = j.at("visible_to").get<RoleSet>();
  const auto& content = j.at("content");
  const auto type = content.at("type").get<std::string>();
  if (type == "text") {
    m.content = content.at("text").get<std::string>();
  } else if (type == "tool_calls") {
    m.content = content.at("calls").get<ToolCallBatch>();
  } else if (type == "tool_results") {
    m.content = content.at("results").get<ToolResultBatch>();
  } else {
    throw std::invalid_argument("unknown message content type '" + type + "'");
  }
}

}  // namespace toolsim
