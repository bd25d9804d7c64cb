#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "toolsim/message.hpp"

namespace toolsim {

enum class ArgKind { String, Number, Boolean, Timestamp, Latitude, Longitude, StringList, Object };

/// Short kind name used in scenario files ("timestamp", "list-of-string", ...).
std::string_view kind_name(ArgKind kind);
/// Kind as presented in validation errors, e.g. "timestamp (unix seconds, number)".
std::string_view kind_description(ArgKind kind);
ArgKind parse_kind(std::string_view name);

struct ArgSpec {
  std::string name;
  ArgKind kind = ArgKind::String;
  std::string description;
  bool required = true;
  std::optional<Json> default_value;

  friend bool operator==(const ArgSpec&, const ArgSpec&) = default;
};

/// Precondition on one settings flag. When `when_argument` is set the check
/// only applies if that boolean argument is true (e.g. turning a service on).
struct StateRequirement {
  std::string flag;
  bool expected = true;
  std::string error_kind;
  std::string message;
  std::optional<std::string> when_argument;

  friend bool operator==(const StateRequirement&, const StateRequirement&) = default;
};

struct ToolSchema {
  std::string name;
  std::string domain;
  std::string description;
  std::vector<ArgSpec> args;
  std::string returns_description;
  std::vector<std::string> declared_errors;
  std::set<std::string> reads;
  std::set<std::string> writes;
  std::vector<StateRequirement> requires_state;

  const ArgSpec* find_arg(std::string_view arg_name) const;

  friend bool operator==(const ToolSchema&, const ToolSchema&) = default;
};

class ValidationError : public std::runtime_error {
 public:
  enum class Kind { MissingArgument, WrongType, UnknownArgument, UnknownTool };

  ValidationError(Kind kind, std::string subject, const std::string& message)
      : std::runtime_error(message), kind_(kind), subject_(std::move(subject)) {}

  Kind kind() const { return kind_; }
  /// Offending argument (or tool) name.
  const std::string& subject() const { return subject_; }
  std::string_view kind_name() const;

 private:
  Kind kind_;
  std::string subject_;
};

/// Checks presence, kinds and names of `args` against `schema`. Integers are
/// accepted where numbers are expected; timestamps must be integral and are
/// normalized to integers; null optional arguments are dropped; defaults are
/// filled in when `fill_defaults` is set. Throws ValidationError.
Json validate_arguments(const ToolSchema& schema, const Json& args, bool fill_defaults = true);

/// Function-calling wire form: {"name", "description", "parameters": {...}}.
/// With `include_types == false` every property omits its type information.
Json render_schema(const ToolSchema& schema, bool include_types = true);

/// Inverse of render_schema for the fields the wire form carries
/// (name, description, argument names/kinds/descriptions/required/defaults).
ToolSchema parse_rendered_schema(const Json& rendered);

/// `name(arg=value, ...)` with arguments in name order and JSON-literal values.
std::string render_canonical_call(std::string_view name, const Json& args);

}  // namespace toolsim
