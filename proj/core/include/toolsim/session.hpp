#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "toolsim/adapter.hpp"
#include "toolsim/bus.hpp"
#include "toolsim/catalog.hpp"
#include "toolsim/scenario.hpp"
#include "toolsim/trajectory.hpp"

namespace toolsim {

struct SessionConfig {
  std::optional<int> max_turns;  // overrides the scenario's limit
  std::uint64_t seed = 0;
};

/// One conversation between a user and an agent over a scenario's world.
///
/// The constructor posts the user's private context, any demonstrations and
/// the opening message. After that the recipient of the last message always
/// speaks next; the environment answers tool-call batches itself. The session
/// ends when the environment executes end_conversation, when the counted turns
/// reach the limit, when an adapter fails, or when forced.
class Session {
 public:
  using Listener = std::function<void(const Snapshot&)>;

  Session(Scenario scenario, std::shared_ptr<RoleAdapter> agent, std::shared_ptr<RoleAdapter> user,
          SessionConfig config = {}, const Catalog& catalog = Catalog::standard());

  /// Posts at most one message. Returns false when the session has ended or
  /// the speaker is waiting for input.
  bool step();
  /// Steps until the session ends or a speaker waits for input.
  void run();

  bool ended() const { return termination_ != Termination::Running; }
  Termination termination() const { return termination_; }
  const std::string& detail() const { return detail_; }
  /// The role whose adapter is waiting for input, if any.
  std::optional<Role> awaiting() const { return awaiting_; }
  std::optional<Role> next_speaker() const { return bus_.next_speaker(); }
  void force_end(std::string reason);

  /// The schema-level failure (UnknownTool, MissingArgument, WrongType,
  /// UnknownArgument) the environment would report for this call right now,
  /// if any. State-dependent errors are not checked.
  std::optional<ToolOutcome> check_call(Role caller, const ToolCallRequest& request) const;

  const Scenario& scenario() const { return scenario_; }
  const MessageBus& bus() const { return bus_; }
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }
  const WorldState& state() const { return state_; }
  const PresentedToolset& toolset() const { return toolset_; }
  int max_turns() const { return max_turns_; }
  Trajectory trajectory() const;

  /// Called after every posted message with its snapshot.
  void set_listener(Listener listener) { listener_ = std::move(listener); }

 private:
  void post(Message message);
  NamedCall resolve(Role caller, const ToolCallRequest& request) const;
  void environment_turn();
  void role_turn(Role role);

  Scenario scenario_;
  std::shared_ptr<RoleAdapter> agent_;
  std::shared_ptr<RoleAdapter> user_;
  const Catalog& catalog_;
  PresentedToolset toolset_;
  std::vector<Json> user_tools_;
  std::uint64_t seed_;
  int max_turns_;

  WorldState state_;
  MessageBus bus_;
  std::vector<Snapshot> snapshots_;
  Termination termination_ = Termination::Running;
  std::string detail_;
  std::optional<Role> awaiting_;
  Listener listener_;
};

/// Runs a session to completion. Adapters that wait for input abort the run.
Trajectory run_session(const Scenario& scenario, RoleAdapter& agent, RoleAdapter& user, SessionConfig config = {},
                       const Catalog& catalog = Catalog::standard());

/// Initial messages a session posts before anyone speaks: the user's private
/// context (when a goal or knowledge boundary is set), the demonstrations, then
/// the opening message. Turn indices are left at 0.
std::vector<Message> initial_messages(const Scenario& scenario);

}  // namespace toolsim
