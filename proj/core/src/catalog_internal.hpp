#pragma once

// Helpers shared by the tool implementation files. Not installed.

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "toolsim/catalog.hpp"

namespace toolsim::detail {

using ToolList = std::vector<ToolDefinition>;

void add_personal_tools(ToolList& tools);
void add_settings_tools(ToolList& tools);
void add_utility_tools(ToolList& tools);
void add_unit_conversion_tool(ToolList& tools, std::shared_ptr<const CatalogFixtures> fixtures);
void add_knowledge_tools(ToolList& tools, std::shared_ptr<const CatalogFixtures> fixtures);

[[noreturn]] void raise(ToolErrorKind kind, const std::string& message);

/// Value of a settings flag by state key ("cellular", "wifi", ...). Throws
/// std::invalid_argument for other keys.
bool settings_flag(const SettingsState& settings, std::string_view flag);

ToolSchema make_schema(std::string name, std::string domain, std::string description, std::vector<ArgSpec> args,
                       std::string returns, std::vector<std::string> errors, std::set<std::string> reads,
                       std::set<std::string> writes);

ArgSpec required_arg(std::string name, ArgKind kind, std::string description);
ArgSpec optional_arg(std::string name, ArgKind kind, std::string description,
                     std::optional<Json> default_value = std::nullopt);

std::optional<std::string> opt_string(const Json& args, const char* key);
std::optional<double> opt_number(const Json& args, const char* key);
std::optional<std::int64_t> opt_timestamp(const Json& args, const char* key);
std::optional<bool> opt_bool(const Json& args, const char* key);

/// Commit step for read-only tools: returns the planned value.
ToolCommit returning(Json value);

bool contains_ci(std::string_view haystack, std::string_view needle);
bool equals_ci(std::string_view a, std::string_view b);
std::string lower(std::string_view s);

/// ValueError unless the coordinates are within [-90, 90] x [-180, 180].
void check_coordinates(double latitude, double longitude);

}  // namespace toolsim::detail
