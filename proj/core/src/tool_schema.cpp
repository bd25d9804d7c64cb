#include "toolsim/tool_schema.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace toolsim {

namespace {

constexpr double kLatitudeBound = 90.0;
constexpr double kLongitudeBound = 180.0;

bool is_integral_number(const Json& v) {
  if (v.is_number_integer()) return true;
  if (!v.is_number_float()) return false;
  const double d = v.get<double>();
  return std::isfinite(d) && std::trunc(d) == d && std::fabs(d) < 9.0e15;
}

[[noreturn]] void wrong_type(const ArgSpec& spec, const Json& value) {
  throw ValidationError(ValidationError::Kind::WrongType, spec.name,
                        "argument '" + spec.name + "' expects " + std::string(kind_description(spec.kind)) + ", got " +
                            std::string(value.type_name()));
}

Json check_kind(const ArgSpec& spec, const Json& value) {
  switch (spec.kind) {
    case ArgKind::String:
      if (value.is_string()) return value;
      break;
    case ArgKind::Number:
    case ArgKind::Latitude:
    case ArgKind::Longitude:
      if (value.is_number() && !value.is_boolean()) return value;
      break;
    case ArgKind::Boolean:
      if (value.is_boolean()) return value;
      break;
    case ArgKind::Timestamp:
      if (value.is_number_integer()) return Json(value.get<std::int64_t>());
      if (is_integral_number(value)) return Json(static_cast<std::int64_t>(value.get<double>()));
      break;
    case ArgKind::StringList:
      if (value.is_array()) {
        bool all_strings = true;
        for (const auto& item : value) all_strings = all_strings && item.is_string();
        if (all_strings) return value;
      }
      break;
    case ArgKind::Object:
      if (value.is_object()) return value;
      break;
  }
  wrong_type(spec, value);
}

Json type_fragment(ArgKind kind) {
  switch (kind) {
    case ArgKind::String:
      return Json{{"type", "string"}};
    case ArgKind::Number:
      return Json{{"type", "number"}};
    case ArgKind::Boolean:
      return Json{{"type", "boolean"}};
    case ArgKind::Timestamp:
      return Json{{"type", "integer"}};
    case ArgKind::Latitude:
      return Json{{"type", "number"}, {"minimum", -kLatitudeBound}, {"maximum", kLatitudeBound}};
    case ArgKind::Longitude:
      return Json{{"type", "number"}, {"minimum", -kLongitudeBound}, {"maximum", kLongitudeBound}};
    case ArgKind::StringList:
      return Json{{"type", "array"}, {"items", {{"type", "string"}}}};
    case ArgKind::Object:
      return Json{{"type", "object"}};
  }
  return Json::object();
}

ArgKind kind_from_fragment(const Json& property) {
  auto type_it = property.find("type");
  if (type_it == property.end()) return ArgKind::String;
  const auto type = type_it->get<std::string>();
  if (type == "string") return ArgKind::String;
  if (type == "boolean") return ArgKind::Boolean;
  if (type == "integer") return ArgKind::Timestamp;
  if (type == "array") return ArgKind::StringList;
  if (type == "object") return ArgKind::Object;
  if (type == "number") {
    const double max = property.value("maximum", std::numeric_limits<double>::quiet_NaN());
    if (max == kLatitudeBound) return ArgKind::Latitude;
    if (max == kLongitudeBound) return ArgKind::Longitude;
    return ArgKind::Number;
  }
  throw std::invalid_argument("unsupported schema type '" + type + "'");
}

}  // namespace

std::string_view kind_name(ArgKind kind) {
  switch (kind) {
    case ArgKind::String:
      return "string";
    case ArgKind::Number:
      return "number";
    case ArgKind::Boolean:
      return "boolean";
    case ArgKind::Timestamp:
      return "timestamp";
    case ArgKind::Latitude:
      return "latitude";
    case ArgKind::Longitude:
      return "longitude";
    case ArgKind::StringList:
      return "list-of-string";
    case ArgKind::Object:
      return "object";
  }
  return "unknown";
}

std::string_view kind_description(ArgKind kind) {
  switch (kind) {
    case ArgKind::String:
      return "string";
    case ArgKind::Number:
      return "number";
    case ArgKind::Boolean:
      return "boolean (true or false)";
    case ArgKind::Timestamp:
      return "timestamp (unix seconds, number)";
    case ArgKind::Latitude:
      return "latitude (decimal degrees in [-90, 90], number)";
    case ArgKind::Longitude:
      return "longitude (decimal degrees in [-180, 180], number)";
    case ArgKind::StringList:
      return "list of strings";
    case ArgKind::Object:
      return "object";
  }
  return "unknown";
}

ArgKind parse_kind(std::string_view name) {
  for (ArgKind k : {ArgKind::String, ArgKind::Number, ArgKind::Boolean, ArgKind::Timestamp, ArgKind::Latitude,
                    ArgKind::Longitude, ArgKind::StringList, ArgKind::Object}) {
    if (kind_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown argument kind '" + std::string(name) + "'");
}

const ArgSpec* ToolSchema::find_arg(std::string_view arg_name) const {
  for (const auto& a : args) {
    if (a.name == arg_name) return &a;
  }
  return nullptr;
}

std::string_view ValidationError::kind_name() const {
  switch (kind_) {
    case Kind::MissingArgument:
      return "MissingArgument";
    case Kind::WrongType:
      return "WrongType";
    case Kind::UnknownArgument:
      return "UnknownArgument";
    case Kind::UnknownTool:
      return "UnknownTool";
  }
  return "ValidationError";
}

Json validate_arguments(const ToolSchema& schema, const Json& args, bool fill_defaults) {
  if (!args.is_null() && !args.is_object()) {
    throw ValidationError(ValidationError::Kind::WrongType, schema.name,
                          "arguments to '" + schema.name + "' must be an object of named arguments");
  }
  Json normalized = Json::object();
  if (args.is_object()) {
    for (const auto& [name, value] : args.items()) {
      if (schema.find_arg(name) == nullptr) {
        throw ValidationError(ValidationError::Kind::UnknownArgument, name,
                              "'" + schema.name + "' got an unexpected argument '" + name + "'");
      }
    }
  }
  for (const auto& spec : schema.args) {
    const Json* value = nullptr;
    if (args.is_object()) {
      auto it = args.find(spec.name);
      if (it != args.end() && !it->is_null()) value = &*it;
    }
    if (value == nullptr) {
      if (spec.required) {
        throw ValidationError(ValidationError::Kind::MissingArgument, spec.name,
                              "'" + schema.name + "' is missing required argument '" + spec.name + "' (" +
                                  std::string(kind_description(spec.kind)) + ")");
      }
      if (fill_defaults && spec.default_value) normalized[spec.name] = *spec.default_value;
      continue;
    }
    normalized[spec.name] = check_kind(spec, *value);
  }
  return normalized;
}

Json render_schema(const ToolSchema& schema, bool include_types) {
  Json properties = Json::object();
  Json required = Json::array();
  for (const auto& arg : schema.args) {
    Json property = include_types ? type_fragment(arg.kind) : Json::object();
    property["description"] = arg.description;
    if (arg.default_value) property["default"] = *arg.default_value;
    properties[arg.name] = std::move(property);
    if (arg.required) required.push_back(arg.name);
  }
  std::sort(required.begin(), required.end());
  return Json{{"name", schema.name},
              {"description", schema.description},
              {"parameters", {{"type", "object"}, {"properties", std::move(properties)}, {"required", required}}}};
}

ToolSchema parse_rendered_schema(const Json& rendered) {
  ToolSchema schema;
  schema.name = rendered.at("name").get<std::string>();
  schema.description = rendered.value("description", std::string{});
  const auto& params = rendered.at("parameters");
  std::set<std::string> required;
  for (const auto& r : params.value("required", Json::array())) required.insert(r.get<std::string>());
  // The wire form has no argument order; parsed schemas are name-ordered.
  const Json properties = params.value("properties", Json::object());
  for (const auto& [name, property] : properties.items()) {
    ArgSpec arg;
    arg.name = name;
    arg.kind = kind_from_fragment(property);
    arg.description = property.value("description", std::string{});
    arg.required = required.count(name) > 0;
    if (auto it = property.find("default"); it != property.end()) arg.default_value = *it;
    schema.args.push_back(std::move(arg));
  }
  return schema;
}

std::string render_canonical_call(std::string_view name, const Json& args) {
  std::string out(name);
  out += '(';
  bool first = true;
  if (args.is_object()) {
    for (const auto& [key, value] : args.items()) {
      if (!first) out += ", ";
      first = false;
      out += key;
      out += '=';
      out += value.dump();
    }
  }
  out += ')';
  return out;
}

}  // namespace toolsim
