#include "toolsim/adapter.hpp"

namespace toolsim {

ScriptedAdapter::ScriptedAdapter(std::vector<ScriptStep> steps, std::string name)
    : steps_(std::move(steps)), name_(std::move(name)) {}

std::optional<RoleOutput> ScriptedAdapter::step(const StepContext& context) {
  if (next_ >= steps_.size()) {
    throw AdapterError("scripted " + std::string(to_string(context.role)) + " '" + name_ + "' ran out of steps after " +
                       std::to_string(steps_.size()));
  }
  const auto& current = steps_[next_++];
  if (const auto* text = std::get_if<std::string>(&current)) return RoleOutput{*text};

  ToolCallBatch batch = std::get<ToolCallBatch>(current);
  if (context.toolset != nullptr) {
    for (auto& call : batch) {
      // Names the agent was not offered pass through untouched, so scripts can
      // reproduce calls to tools that do not exist.
      if (auto shown = context.toolset->presented_name(call.tool_name)) call.tool_name = *shown;
    }
  }
  return RoleOutput{std::move(batch)};
}

std::optional<RoleOutput> HumanBridgeAdapter::step(const StepContext&) {
  if (queue_.empty()) return std::nullopt;
  RoleOutput out = std::move(queue_.front());
  queue_.pop_front();
  return out;
}

}  // namespace toolsim
