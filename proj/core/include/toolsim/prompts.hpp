#pragma once

#include <string>
#include <string_view>

#include "toolsim/scenario.hpp"

namespace toolsim {

/// System prompt given to LLM-backed agents (prompts/agent_system.txt).
std::string_view agent_system_prompt();

/// The user simulator's private context: prompts/user_simulator.txt with the
/// goal and knowledge boundary filled in.
std::string render_user_context(const UserSpec& spec);

}  // namespace toolsim
