// Getters and setters for the four device settings. Turning a service on is
// blocked by low battery mode, and enabling low battery mode switches the
// three services off, which together form the nested dependency chain.

#include "catalog_internal.hpp"

namespace toolsim::detail {

namespace {

struct SettingSpec {
  const char* tool_stem;  // get_<stem>_status / set_<stem>_status
  const char* flag;
  const char* label;
  bool SettingsState::*member;
};

constexpr SettingSpec kSettings[] = {
    {"cellular_service", "cellular", "cellular service", &SettingsState::cellular},
    {"wifi", "wifi", "wifi", &SettingsState::wifi},
    {"location_service", "location_service", "location service", &SettingsState::location_service},
    {"low_battery_mode", "low_battery_mode", "low battery mode", &SettingsState::low_battery_mode},
};

}  // namespace

void add_settings_tools(ToolList& tools) {
  for (const auto& spec : kSettings) {
    const std::string stem = spec.tool_stem;
    const std::string label = spec.label;
    auto member = spec.member;

    tools.push_back({make_schema("get_" + stem + "_status", "settings", "Get whether " + label + " is on.", {},
                                 "True if " + label + " is on.", {}, {spec.flag}, {}),
                     [member](const Json&, const WorldState& pre) { return returning(pre.settings.*member); }});

    const bool is_low_battery = member == &SettingsState::low_battery_mode;
    ToolSchema setter = make_schema("set_" + stem + "_status", "settings", "Turn " + label + " on or off.",
                                    {required_arg("on", ArgKind::Boolean, "True to turn on, false to turn off.")},
                                    "Nothing.", {}, {spec.flag}, {spec.flag});
    if (is_low_battery) {
      setter.description += " Turning it on also turns off cellular service, wifi and location service.";
      setter.writes.insert({"cellular", "wifi", "location_service"});
    } else {
      setter.declared_errors.push_back("PermissionError");
      setter.reads.insert("low_battery_mode");
      setter.requires_state.push_back({"low_battery_mode", false, "PermissionError",
                                       "cannot turn on " + label + " while low battery mode is on", "on"});
    }
    tools.push_back({std::move(setter), [member, is_low_battery](const Json& args, const WorldState&) -> ToolCommit {
                       const bool on = args.at("on").get<bool>();
                       return [member, is_low_battery, on](WorldState& state) -> Json {
                         state.settings.*member = on;
                         if (is_low_battery && on) {
                           state.settings.cellular = false;
                           state.settings.wifi = false;
                           state.settings.location_service = false;
                         }
                         return nullptr;
                       };
                     }});
  }
}

}  // namespace toolsim::detail
