#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace toolsim {

using Json = nlohmann::json;

enum class Role : std::uint8_t { User = 0, Agent = 1, ExecutionEnvironment = 2 };

inline constexpr Role kAllRoles[] = {Role::User, Role::Agent, Role::ExecutionEnvironment};

std::string_view to_string(Role role);
/// Accepts "user", "agent", "execution_environment" (case-insensitive) and "env".
Role parse_role(std::string_view text);

/// Small value-type set of roles; serializes as a sorted list of role names.
class RoleSet {
 public:
  constexpr RoleSet() = default;
  constexpr RoleSet(std::initializer_list<Role> roles) {
    for (Role r : roles) insert(r);
  }

  constexpr void insert(Role r) { bits_ |= bit(r); }
  constexpr bool contains(Role r) const { return (bits_ & bit(r)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }

  friend constexpr bool operator==(RoleSet, RoleSet) = default;

 private:
  static constexpr std::uint8_t bit(Role r) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(r)); }
  std::uint8_t bits_ = 0;
};

/// One requested tool invocation. Names are the ones presented to the caller
/// (possibly scrambled); the environment maps them back before dispatch.
struct ToolCallRequest {
  std::string call_id;
  std::string tool_name;
  Json arguments = Json::object();
  int batch_position = 0;

  friend bool operator==(const ToolCallRequest&, const ToolCallRequest&) = default;
};

/// Result of executing a tool: either a success value or a typed failure.
struct ToolOutcome {
  bool ok = true;
  Json value;
  std::string error_kind;
  std::string error_message;

  static ToolOutcome success(Json v) { return ToolOutcome{true, std::move(v), {}, {}}; }
  static ToolOutcome failure(std::string kind, std::string message) {
    return ToolOutcome{false, nullptr, std::move(kind), std::move(message)};
  }

  friend bool operator==(const ToolOutcome&, const ToolOutcome&) = default;
};

struct ToolResult {
  std::string call_id;
  std::string tool_name;
  ToolOutcome outcome;

  friend bool operator==(const ToolResult&, const ToolResult&) = default;
};

using ToolCallBatch = std::vector<ToolCallRequest>;
using ToolResultBatch = std::vector<ToolResult>;
using MessageContent = std::variant<std::string, ToolCallBatch, ToolResultBatch>;

struct Message {
  int turn_index = 0;
  Role sender = Role::User;
  Role recipient = Role::Agent;
  MessageContent content;
  RoleSet visible_to;

  bool is_text() const { return std::holds_alternative<std::string>(content); }
  const std::string* text() const { return std::get_if<std::string>(&content); }
  const ToolCallBatch* tool_calls() const { return std::get_if<ToolCallBatch>(&content); }
  const ToolResultBatch* tool_results() const { return std::get_if<ToolResultBatch>(&content); }

  friend bool operator==(const Message&, const Message&) = default;
};

/// Human-readable rendering of an outcome as the caller sees it
/// (`ConnectionError: cellular service is not on`, or the JSON result).
std::string describe_outcome(const ToolOutcome& outcome);

void to_json(Json& j, Role r);
void from_json(const Json& j, Role& r);
void to_json(Json& j, const RoleSet& s);
void from_json(const Json& j, RoleSet& s);
void to_json(Json& j, const ToolCallRequest& c);
void from_json(const Json& j, ToolCallRequest& c);
void to_json(Json& j, const ToolOutcome& o);
void from_json(const Json& j, ToolOutcome& o);
void to_json(Json& j, const ToolResult& r);
void from_json(const Json& j, ToolResult& r);
void to_json(Json& j, const Message& m);
void from_json(const Json& j, Message& m);

}  // namespace toolsim
