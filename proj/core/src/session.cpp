#include "toolsim/session.hpp"

#include "toolsim/prompts.hpp"

namespace toolsim {

std::vector<Message> initial_messages(const Scenario& scenario) {
  std::vector<Message> out;
  if (!scenario.user.goal.empty() || !scenario.user.knowledge_boundary.empty()) {
    out.push_back(Message{0, Role::ExecutionEnvironment, Role::User, render_user_context(scenario.user), RoleSet{Role::User}});
  }
  for (auto demo : scenario.user.demonstrations) {
    demo.visible_to = RoleSet{Role::User};
    out.push_back(std::move(demo));
  }
  out.push_back(Message{0, Role::User, Role::Agent, scenario.opening_message, RoleSet{Role::User, Role::Agent}});
  return out;
}

Session::Session(Scenario scenario, std::shared_ptr<RoleAdapter> agent, std::shared_ptr<RoleAdapter> user,
                 SessionConfig config, const Catalog& catalog)
    : scenario_(std::move(scenario)),
      agent_(std::move(agent)),
      user_(std::move(user)),
      catalog_(catalog),
      toolset_(presented_tools(scenario_, catalog)),
      seed_(config.seed),
      max_turns_(config.max_turns.value_or(scenario_.max_turns)),
      state_(scenario_.initial_state) {
  if (!agent_ || !user_) throw std::invalid_argument("a session needs both an agent and a user adapter");
  if (max_turns_ < 2) throw std::invalid_argument("max_turns must be at least 2");
  const auto* end = catalog_.find(kEndConversation);
  if (end == nullptr) throw std::logic_error("catalog lacks end_conversation");
  user_tools_.push_back(render_schema(end->schema));
  for (auto& m : initial_messages(scenario_)) {
    if (ended()) break;
    post(std::move(m));
  }
}

void Session::post(Message message) {
  if (auto expected = bus_.next_speaker(); expected && *expected != message.sender) {
    throw std::logic_error("out-of-turn message from " + std::string(to_string(message.sender)) + ", expected " +
                           std::string(to_string(*expected)));
  }
  const Message& posted = bus_.append(std::move(message));
  snapshots_.push_back(take_snapshot(state_, posted.turn_index, posted));
  if (turn_count(bus_.messages()) >= max_turns_ && !ended()) {
    termination_ = Termination::Cutoff;
    detail_ = "reached " + std::to_string(max_turns_) + " turns";
  }
  if (listener_) listener_(snapshots_.back());
}

bool Session::step() {
  if (ended()) return false;
  const auto speaker = bus_.next_speaker();
  if (!speaker) return false;
  const std::size_t before = bus_.size();
  if (*speaker == Role::ExecutionEnvironment) {
    environment_turn();
  } else {
    role_turn(*speaker);
  }
  return bus_.size() > before;
}

void Session::run() {
  while (step()) {
  }
}

void Session::force_end(std::string reason) {
  if (ended()) return;
  termination_ = Termination::Forced;
  detail_ = std::move(reason);
  awaiting_.reset();
}

void Session::role_turn(Role role) {
  StepContext context;
  context.role = role;
  context.view = bus_.view_for(role);
  context.seed = seed_;
  if (role == Role::Agent) {
    context.tools = toolset_.rendered();
    context.toolset = &toolset_;
  } else {
    context.tools = user_tools_;
  }
  auto& adapter = role == Role::Agent ? *agent_ : *user_;

  std::optional<RoleOutput> output;
  try {
    output = adapter.step(context);
  } catch (const std::exception& e) {
    termination_ = Termination::Aborted;
    detail_ = std::string(to_string(role)) + " adapter failed: " + e.what();
    awaiting_.reset();
    return;
  }
  if (!output) {
    awaiting_ = role;
    return;
  }
  awaiting_.reset();

  const Role other = role == Role::Agent ? Role::User : Role::Agent;
  if (auto* text = std::get_if<std::string>(&*output)) {
    post(Message{0, role, other, std::move(*text), RoleSet{role, other}});
    return;
  }
  auto batch = std::get<ToolCallBatch>(std::move(*output));
  if (batch.empty()) {
    termination_ = Termination::Aborted;
    detail_ = std::string(to_string(role)) + " adapter produced an empty tool-call batch";
    return;
  }
  const int turn = static_cast<int>(bus_.size()) + 1;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    batch[i].batch_position = static_cast<int>(i);
    if (batch[i].call_id.empty()) batch[i].call_id = "call_" + std::to_string(turn) + "_" + std::to_string(i);
  }
  post(Message{0, role, Role::ExecutionEnvironment, std::move(batch), RoleSet{role, Role::ExecutionEnvironment}});
}

NamedCall Session::resolve(Role caller, const ToolCallRequest& request) const {
  NamedCall call{request.tool_name, request.arguments, true};
  if (caller == Role::Agent) {
    const auto original = toolset_.original_name(request.tool_name);
    call.offered = original.has_value();
    if (original) call.tool_name = *original;
  } else {
    call.offered = request.tool_name == kEndConversation;
  }
  return call;
}

std::optional<ToolOutcome> Session::check_call(Role caller, const ToolCallRequest& request) const {
  const NamedCall call = resolve(caller, request);
  if (!call.offered) {
    return ToolOutcome::failure("UnknownTool", "no tool named '" + request.tool_name + "'");
  }
  PreparedCall prepared = catalog_.prepare(call.tool_name, call.arguments, state_);
  if (!prepared.failure) return std::nullopt;
  const auto& kind = prepared.failure->error_kind;
  if (kind == "MissingArgument" || kind == "WrongType" || kind == "UnknownArgument" || kind == "UnknownTool") {
    return prepared.failure;
  }
  return std::nullopt;
}

void Session::environment_turn() {
  const Message& request = bus_.messages().back();
  const auto* calls = request.tool_calls();
  if (calls == nullptr) {
    termination_ = Termination::Aborted;
    detail_ = "the execution environment received a message that is not a tool-call batch";
    return;
  }
  const Role caller = request.sender;
  std::vector<NamedCall> named;
  named.reserve(calls->size());
  for (const auto& c : *calls) named.push_back(resolve(caller, c));

  const int turn = static_cast<int>(bus_.size()) + 1;
  const auto outcomes = execute_batch(catalog_, named, state_, turn);
  ToolResultBatch results;
  bool ends = false;
  for (std::size_t i = 0; i < calls->size(); ++i) {
    results.push_back(ToolResult{(*calls)[i].call_id, (*calls)[i].tool_name, outcomes[i]});
    ends = ends || (named[i].tool_name == kEndConversation && named[i].offered && outcomes[i].ok);
  }
  if (ends) {
    termination_ = Termination::EndConversation;
    detail_.clear();
  }
  post(Message{0, Role::ExecutionEnvironment, caller, std::move(results), RoleSet{Role::ExecutionEnvironment, caller}});
}

Trajectory Session::trajectory() const {
  Trajectory t;
  t.scenario_id = scenario_.id;
  t.seed = seed_;
  t.agent = agent_->identity();
  t.user = user_->identity();
  t.max_turns = max_turns_;
  t.snapshots = snapshots_;
  t.termination = termination_;
  t.detail = detail_;
  return t;
}

Trajectory run_session(const Scenario& scenario, RoleAdapter& agent, RoleAdapter& user, SessionConfig config,
                       const Catalog& catalog) {
  // Non-owning handles: the caller keeps the adapters alive for the call.
  std::shared_ptr<RoleAdapter> agent_handle(&agent, [](RoleAdapter*) {});
  std::shared_ptr<RoleAdapter> user_handle(&user, [](RoleAdapter*) {});
  Session session(scenario, agent_handle, user_handle, config, catalog);
  session.run();
  if (!session.ended()) {
    const auto who = session.awaiting().value_or(Role::User);
    session.force_end(std::string(to_string(who)) + " adapter is waiting for input in a batch run");
    auto t = session.trajectory();
    t.termination = Termination::Aborted;
    return t;
  }
  return session.trajectory();
}

}  // namespace toolsim
