#include "toolsim/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "catalog_internal.hpp"

namespace toolsim {

std::string_view to_string(ToolErrorKind kind) {
  switch (kind) {
    case ToolErrorKind::ConnectionError:
      return "ConnectionError";
    case ToolErrorKind::PermissionError:
      return "PermissionError";
    case ToolErrorKind::ValueError:
      return "ValueError";
    case ToolErrorKind::KeyError:
      return "KeyError";
    case ToolErrorKind::NoMatchError:
      return "NoMatchError";
  }
  return "ToolError";
}

namespace detail {

void raise(ToolErrorKind kind, const std::string& message) { throw ToolError(kind, message); }

bool settings_flag(const SettingsState& settings, std::string_view flag) {
  if (flag == "cellular") return settings.cellular;
  if (flag == "wifi") return settings.wifi;
  if (flag == "location_service") return settings.location_service;
  if (flag == "low_battery_mode") return settings.low_battery_mode;
  throw std::invalid_argument("unknown settings flag '" + std::string(flag) + "'");
}

ToolSchema make_schema(std::string name, std::string domain, std::string description, std::vector<ArgSpec> args,
                       std::string returns, std::vector<std::string> errors, std::set<std::string> reads,
                       std::set<std::string> writes) {
  ToolSchema s;
  s.name = std::move(name);
  s.domain = std::move(domain);
  s.description = std::move(description);
  s.args = std::move(args);
  s.returns_description = std::move(returns);
  s.declared_errors = std::move(errors);
  s.reads = std::move(reads);
  s.writes = std::move(writes);
  return s;
}

ArgSpec required_arg(std::string name, ArgKind kind, std::string description) {
  return ArgSpec{std::move(name), kind, std::move(description), true, std::nullopt};
}

ArgSpec optional_arg(std::string name, ArgKind kind, std::string description, std::optional<Json> default_value) {
  return ArgSpec{std::move(name), kind, std::move(description), false, std::move(default_value)};
}

std::optional<std::string> opt_string(const Json& args, const char* key) {
  auto it = args.find(key);
  if (it == args.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

std::optional<double> opt_number(const Json& args, const char* key) {
  auto it = args.find(key);
  if (it == args.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

std::optional<std::int64_t> opt_timestamp(const Json& args, const char* key) {
  auto it = args.find(key);
  if (it == args.end() || it->is_null()) return std::nullopt;
  return it->get<std::int64_t>();
}

std::optional<bool> opt_bool(const Json& args, const char* key) {
  auto it = args.find(key);
  if (it == args.end() || it->is_null()) return std::nullopt;
  return it->get<bool>();
}

ToolCommit returning(Json value) {
  return [value = std::move(value)](WorldState&) { return value; };
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  return lower(haystack).find(lower(needle)) != std::string::npos;
}

bool equals_ci(std::string_view a, std::string_view b) { return lower(a) == lower(b); }

void check_coordinates(double latitude, double longitude) {
  if (!(latitude >= -90.0 && latitude <= 90.0)) {
    raise(ToolErrorKind::ValueError, "latitude " + Json(latitude).dump() + " is outside [-90, 90]");
  }
  if (!(longitude >= -180.0 && longitude <= 180.0)) {
    raise(ToolErrorKind::ValueError, "longitude " + Json(longitude).dump() + " is outside [-180, 180]");
  }
}

}  // namespace detail

namespace {

ToolDefinition end_conversation_tool() {
  ToolDefinition def;
  def.schema.name = std::string(kEndConversation);
  def.schema.domain = "conversation";
  def.schema.description = "End the conversation once the request is fulfilled or cannot be fulfilled.";
  def.schema.returns_description = "Nothing.";
  def.plan = [](const Json&, const WorldState&) { return detail::returning(nullptr); };
  def.user_only = true;
  return def;
}

}  // namespace

Catalog::Catalog(CatalogFixtures fixtures) : fixtures_(std::make_shared<const CatalogFixtures>(std::move(fixtures))) {
  detail::add_personal_tools(tools_);
  detail::add_settings_tools(tools_);
  detail::add_utility_tools(tools_);
  detail::add_unit_conversion_tool(tools_, fixtures_);
  detail::add_knowledge_tools(tools_, fixtures_);
  tools_.push_back(end_conversation_tool());
  std::sort(tools_.begin(), tools_.end(),
            [](const ToolDefinition& a, const ToolDefinition& b) { return a.schema.name < b.schema.name; });
  for (std::size_t i = 1; i < tools_.size(); ++i) {
    if (tools_[i].schema.name == tools_[i - 1].schema.name) {
      throw std::logic_error("duplicate tool '" + tools_[i].schema.name + "'");
    }
  }
}

const Catalog& Catalog::standard() {
  static const Catalog catalog(embedded_fixtures());
  return catalog;
}

const ToolDefinition* Catalog::find(std::string_view name) const {
  auto it = std::lower_bound(tools_.begin(), tools_.end(), name,
                             [](const ToolDefinition& d, std::string_view n) { return d.schema.name < n; });
  if (it == tools_.end() || it->schema.name != name) return nullptr;
  return &*it;
}

std::vector<ToolSchema> Catalog::schemas() const {
  std::vector<ToolSchema> out;
  for (const auto& t : tools_) out.push_back(t.schema);
  return out;
}

std::vector<ToolSchema> Catalog::agent_schemas() const {
  std::vector<ToolSchema> out;
  for (const auto& t : tools_) {
    if (!t.user_only) out.push_back(t.schema);
  }
  return out;
}

PreparedCall Catalog::prepare(std::string_view name, const Json& args, const WorldState& pre) const {
  PreparedCall call;
  call.tool_name = std::string(name);
  call.arguments = args.is_null() ? Json::object() : args;
  const ToolDefinition* def = find(name);
  if (def == nullptr) {
    call.failure = ToolOutcome::failure("UnknownTool", "no tool named '" + std::string(name) + "'");
    return call;
  }
  Json effective;
  try {
    call.arguments = validate_arguments(def->schema, args, false);
    effective = validate_arguments(def->schema, args, true);
  } catch (const ValidationError& e) {
    call.failure = ToolOutcome::failure(std::string(e.kind_name()), e.what());
    return call;
  }
  for (const auto& req : def->schema.requires_state) {
    if (req.when_argument && !effective.value(*req.when_argument, false)) continue;
    if (detail::settings_flag(pre.settings, req.flag) != req.expected) {
      call.failure = ToolOutcome::failure(req.error_kind, req.message);
      return call;
    }
  }
  try {
    call.commit = def->plan(effective, pre);
  } catch (const ToolError& e) {
    call.failure = ToolOutcome::failure(std::string(to_string(e.kind())), e.what());
  }
  return call;
}

ToolOutcome Catalog::commit(PreparedCall& call, WorldState& state, int turn) const {
  ToolOutcome outcome;
  if (call.failure) {
    outcome = *call.failure;
  } else {
    try {
      outcome = ToolOutcome::success(call.commit(state));
    } catch (const ToolError& e) {
      outcome = ToolOutcome::failure(std::string(to_string(e.kind())), e.what());
    }
  }
  state.traces.push_back(
      ToolTrace{turn, call.tool_name, call.arguments, outcome, render_canonical_call(call.tool_name, call.arguments)});
  return outcome;
}

ToolOutcome Catalog::execute(std::string_view name, const Json& args, WorldState& state, int turn) const {
  auto call = prepare(name, args, state);
  return commit(call, state, turn);
}

std::vector<ToolOutcome> execute_batch(const Catalog& catalog, std::span<const NamedCall> calls, WorldState& state,
                                       int turn) {
  std::vector<PreparedCall> prepared;
  prepared.reserve(calls.size());
  {
    // Planning reads the frozen pre-batch state only, so no call observes a sibling's write.
    const WorldState pre = state;
    for (const auto& c : calls) {
      if (c.offered) {
        prepared.push_back(catalog.prepare(c.tool_name, c.arguments, pre));
        continue;
      }
      PreparedCall unknown;
      unknown.tool_name = c.tool_name;
      unknown.arguments = c.arguments.is_null() ? Json::object() : c.arguments;
      unknown.failure = ToolOutcome::failure("UnknownTool", "no tool named '" + c.tool_name + "'");
      prepared.push_back(std::move(unknown));
    }
  }
  std::vector<ToolOutcome> outcomes;
  outcomes.reserve(calls.size());
  for (auto& p : prepared) outcomes.push_back(catalog.commit(p, state, turn));
  return outcomes;
}

}  // namespace toolsim
