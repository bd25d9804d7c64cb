#include "toolsim/prompts.hpp"

#include <stdexcept>

#include "toolsim/assets.hpp"

namespace toolsim {

namespace {

std::string_view asset(std::string_view name) {
  auto text = embedded_asset(name);
  if (!text) throw std::logic_error("missing embedded asset " + std::string(name));
  return *text;
}

void replace_all(std::string& text, std::string_view from, std::string_view to) {
  for (auto pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
}

}  // namespace

std::string_view agent_system_prompt() { return asset("prompts/agent_system.txt"); }

std::string render_user_context(const UserSpec& spec) {
  std::string text(asset("prompts/user_simulator.txt"));
  replace_all(text, "{{goal}}", spec.goal.empty() ? "(none given)" : spec.goal);
  replace_all(text, "{{knowledge_boundary}}", spec.knowledge_boundary.empty() ? "(nothing further)" : spec.knowledge_boundary);
  while (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

}  // namespace toolsim
