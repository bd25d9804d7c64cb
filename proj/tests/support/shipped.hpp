#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "toolsim/adapter.hpp"
#include "toolsim/scenario.hpp"

namespace shipped {

inline std::filesystem::path source_path(std::string_view relative) {
  return std::filesystem::path(TOOLSIM_SOURCE_DIR) / relative;
}

inline std::filesystem::path scenario_dir() { return source_path("scenarios"); }

inline toolsim::Scenario scenario(const std::string& id) {
  return toolsim::load_scenario(scenario_dir() / (id + ".json"));
}

inline toolsim::ScriptedAdapter adapter(const toolsim::Scenario& s, toolsim::Role role,
                                        const std::string& playbook = "golden") {
  const auto& p = s.playbooks.at(playbook);
  return toolsim::ScriptedAdapter(role == toolsim::Role::Agent ? p.agent : p.user, playbook);
}

}  // namespace shipped
