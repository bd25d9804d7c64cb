#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "toolsim/augmentation.hpp"
#include "toolsim/message.hpp"
#include "toolsim/scenario.hpp"

namespace toolsim {

/// What a role says next: text, or a batch of tool calls for the environment.
using RoleOutput = std::variant<std::string, ToolCallBatch>;

struct StepContext {
  Role role = Role::Agent;
  std::vector<Message> view;  // the role's visibility-filtered sub-view
  std::vector<Json> tools;  // rendered schemas under their presented names
  const PresentedToolset* toolset = nullptr;  // set for the agent
  std::uint64_t seed = 0;
};

/// Unrecoverable adapter failure; the session is marked aborted.
class AdapterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RoleAdapter {
 public:
  virtual ~RoleAdapter() = default;

  /// Stable description recorded in trajectories, e.g. "scripted:golden".
  virtual std::string identity() const = 0;

  /// The role's next message, or std::nullopt if it is waiting for outside
  /// input (a human who has not answered yet). Throws AdapterError.
  virtual std::optional<RoleOutput> step(const StepContext& context) = 0;
};

/// Replays a fixed list of steps in order. Tool calls name original tools and
/// are translated to the presented names when the context carries a tool set.
class ScriptedAdapter : public RoleAdapter {
 public:
  ScriptedAdapter(std::vector<ScriptStep> steps, std::string name);

  std::string identity() const override { return "scripted:" + name_; }
  std::optional<RoleOutput> step(const StepContext& context) override;

  std::size_t remaining() const { return steps_.size() - next_; }

 private:
  std::vector<ScriptStep> steps_;
  std::string name_;
  std::size_t next_ = 0;
};

/// Hands the turn to a person: returns queued input, or waits when there is none.
class HumanBridgeAdapter : public RoleAdapter {
 public:
  explicit HumanBridgeAdapter(std::string name = "human") : name_(std::move(name)) {}

  std::string identity() const override { return "human:" + name_; }
  std::optional<RoleOutput> step(const StepContext& context) override;

  void submit(RoleOutput output) { queue_.push_back(std::move(output)); }
  bool has_pending() const { return !queue_.empty(); }

 private:
  std::string name_;
  std::deque<RoleOutput> queue_;
};

}  // namespace toolsim
