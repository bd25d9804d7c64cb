#include <gtest/gtest.h>

#include <deque>

#include "shipped.hpp"
#include "toolsim/llm.hpp"
#include "toolsim/prompts.hpp"
#include "toolsim/session.hpp"

using namespace toolsim;

namespace {

// Stands in for the HTTP endpoint: replays canned responses or errors and
// records every request. Tests never reach a real model.
class FakeTransport : public ChatTransport {
 public:
  struct Reply {
    std::optional<Json> body;
    std::optional<TransportError> error;
  };

  explicit FakeTransport(std::deque<Reply> replies) : replies_(std::move(replies)) {}

  Json complete(const Json& request) override {
    requests.push_back(request);
    if (replies_.empty()) throw TransportError("no more canned replies", false);
    auto reply = std::move(replies_.front());
    replies_.pop_front();
    if (reply.error) throw *reply.error;
    return *reply.body;
  }

  std::vector<Json> requests;

 private:
  std::deque<Reply> replies_;
};

Json text_reply(const std::string& text) {
  return Json{{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}}};
}

Json call_reply(const std::string& name, const std::string& arguments, const std::string& prose = "") {
  Json message{{"role", "assistant"},
               {"content", prose.empty() ? Json(nullptr) : Json(prose)},
               {"tool_calls", {{{"id", "x1"}, {"type", "function"}, {"function", {{"name", name}, {"arguments", arguments}}}}}}};
  return Json{{"choices", {{{"message", message}}}}};
}

LlmConfig test_config() {
  LlmConfig c;
  c.model = "test-model";
  return c;
}

}  // namespace

TEST(LlmMapping, AgentViewBecomesChatMessages) {
  std::vector<Message> view{
      Message{1, Role::User, Role::Agent, std::string("Is wifi on?"), {}},
      Message{2, Role::Agent, Role::ExecutionEnvironment,
              ToolCallBatch{{"call_2_0", "get_wifi_status", Json::object(), 0}, {"call_2_1", "get_cellular_service_status", Json::object(), 1}},
              {}},
      Message{3, Role::ExecutionEnvironment, Role::Agent,
              ToolResultBatch{{"call_2_0", "get_wifi_status", ToolOutcome::success(true)},
                              {"call_2_1", "get_cellular_service_status", ToolOutcome::failure("PermissionError", "nope")}},
              {}},
      Message{4, Role::Agent, Role::User, std::string("Yes."), {}}};
  const Json chat = to_chat_messages(Role::Agent, view, "SYSTEM");
  ASSERT_EQ(chat.size(), 6u);
  EXPECT_EQ(chat[0], (Json{{"role", "system"}, {"content", "SYSTEM"}}));
  EXPECT_EQ(chat[1], (Json{{"role", "user"}, {"content", "Is wifi on?"}}));
  EXPECT_EQ(chat[2]["role"], "assistant");
  ASSERT_EQ(chat[2]["tool_calls"].size(), 2u);
  EXPECT_EQ(chat[2]["tool_calls"][1]["function"]["name"], "get_cellular_service_status");
  EXPECT_EQ(chat[2]["tool_calls"][0]["function"]["arguments"], "{}");
  EXPECT_EQ(chat[3], (Json{{"role", "tool"}, {"tool_call_id", "call_2_0"}, {"content", "true"}}));
  EXPECT_EQ(chat[4]["tool_call_id"], "call_2_1");
  EXPECT_EQ(chat[4]["content"], "PermissionError: nope");
  EXPECT_EQ(chat[5], (Json{{"role", "assistant"}, {"content", "Yes."}}));
}

TEST(LlmMapping, UserSimulatorSeesContextAsSystemAndAgentAsUser) {
  std::vector<Message> view{Message{1, Role::ExecutionEnvironment, Role::User, std::string("You want X."), RoleSet{Role::User}},
                            Message{2, Role::User, Role::Agent, std::string("Hi"), {}},
                            Message{3, Role::Agent, Role::User, std::string("Hello, how can I help?"), {}}};
  const Json chat = to_chat_messages(Role::User, view, "");
  ASSERT_EQ(chat.size(), 3u);
  EXPECT_EQ(chat[0], (Json{{"role", "system"}, {"content", "You want X."}}));
  EXPECT_EQ(chat[1]["role"], "assistant");
  EXPECT_EQ(chat[2]["role"], "user");
}

TEST(LlmMapping, RequestCarriesToolsModelAndSeed) {
  StepContext ctx;
  ctx.view = {Message{1, Role::User, Role::Agent, std::string("hi"), {}}};
  ctx.tools = {render_schema(Catalog::standard().find("send_message")->schema)};
  ctx.seed = 42;
  const Json req = build_chat_request(test_config(), Role::Agent, ctx, agent_system_prompt());
  EXPECT_EQ(req["model"], "test-model");
  EXPECT_EQ(req["seed"], 42);
  EXPECT_EQ(req["temperature"], 0.0);
  ASSERT_EQ(req["tools"].size(), 1u);
  EXPECT_EQ(req["tools"][0]["type"], "function");
  EXPECT_EQ(req["tools"][0]["function"]["name"], "send_message");
  EXPECT_EQ(req["messages"][0]["content"], std::string(agent_system_prompt()));
}

TEST(LlmParse, ToolCallsWinOverProse) {
  const auto out = parse_chat_response(call_reply("send_message", R"({"phone_number":"+1","content":"hi"})", "Sending now"));
  const auto* batch = std::get_if<ToolCallBatch>(&out);
  ASSERT_NE(batch, nullptr);
  ASSERT_EQ(batch->size(), 1u);
  EXPECT_EQ((*batch)[0].tool_name, "send_message");
  EXPECT_EQ((*batch)[0].arguments["content"], "hi");
}

TEST(LlmParse, MalformedOutputBecomesRecoverableText) {
  auto out = parse_chat_response(call_reply("send_message", "{not json"));
  ASSERT_TRUE(std::holds_alternative<std::string>(out));
  EXPECT_NE(std::get<std::string>(out).find("not valid JSON"), std::string::npos);

  out = parse_chat_response(Json{{"choices", Json::array()}});
  ASSERT_TRUE(std::holds_alternative<std::string>(out));

  out = parse_chat_response(text_reply(""));
  EXPECT_NE(std::get<std::string>(out).find("empty message"), std::string::npos);

  EXPECT_EQ(std::get<std::string>(parse_chat_response(text_reply("Hello"))), "Hello");
}

TEST(LlmAdapter, RetriesRetryableErrorsWithDoublingBackoff) {
  auto transport = std::make_unique<FakeTransport>(std::deque<FakeTransport::Reply>{
      {std::nullopt, TransportError("HTTP 503", true)},
      {std::nullopt, TransportError("HTTP 429", true)},
      {text_reply("Hello"), std::nullopt}});
  auto* raw = transport.get();
  std::vector<std::chrono::milliseconds> sleeps;
  LlmAdapter adapter(Role::Agent, test_config(), std::move(transport), [&](auto d) { sleeps.push_back(d); });
  const auto out = adapter.step(StepContext{});
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(std::get<std::string>(*out), "Hello");
  EXPECT_EQ(raw->requests.size(), 3u);
  EXPECT_EQ(sleeps, (std::vector<std::chrono::milliseconds>{std::chrono::milliseconds{500}, std::chrono::milliseconds{1000}}));
}

TEST(LlmAdapter, GivesUpAfterThreeAttempts) {
  auto transport = std::make_unique<FakeTransport>(std::deque<FakeTransport::Reply>{
      {std::nullopt, TransportError("connection refused", true)},
      {std::nullopt, TransportError("connection refused", true)},
      {std::nullopt, TransportError("connection refused", true)},
      {text_reply("never reached"), std::nullopt}});
  auto* raw = transport.get();
  LlmAdapter adapter(Role::Agent, test_config(), std::move(transport), [](auto) {});
  EXPECT_THROW(adapter.step(StepContext{}), AdapterError);
  EXPECT_EQ(raw->requests.size(), 3u);
}

TEST(LlmAdapter, DoesNotRetryClientErrors) {
  auto transport = std::make_unique<FakeTransport>(
      std::deque<FakeTransport::Reply>{{std::nullopt, TransportError("HTTP 401", false)}});
  auto* raw = transport.get();
  LlmAdapter adapter(Role::Agent, test_config(), std::move(transport), [](auto) { FAIL() << "slept"; });
  EXPECT_THROW(adapter.step(StepContext{}), AdapterError);
  EXPECT_EQ(raw->requests.size(), 1u);
}

TEST(LlmAdapter, DrivesAFullSessionAgainstAScriptedUser) {
  const auto scenario = shipped::scenario("currency_usd_to_eur");
  auto transport = std::make_unique<FakeTransport>(std::deque<FakeTransport::Reply>{
      {call_reply("convert_currency", R"({"amount":100,"from_currency_code":"USD","to_currency_code":"EUR"})"), std::nullopt},
      {text_reply("100 US dollars is 92.15 euros."), std::nullopt}});
  auto* raw = transport.get();
  LlmAdapter agent(Role::Agent, test_config(), std::move(transport), [](auto) {});
  auto user = shipped::adapter(scenario, Role::User);
  const auto t = run_session(scenario, agent, user);
  EXPECT_EQ(t.termination, Termination::EndConversation);
  EXPECT_EQ(t.agent, "llm:test-model");
  ASSERT_EQ(raw->requests.size(), 2u);
  // The second request shows the tool result to the model.
  const auto& messages = raw->requests[1]["messages"];
  EXPECT_EQ(messages.back()["role"], "tool");
  EXPECT_EQ(messages.back()["content"], "92.15");
}

TEST(LlmAdapter, TransportFailureAbortsTheSession) {
  const auto scenario = shipped::scenario("currency_usd_to_eur");
  auto transport = std::make_unique<FakeTransport>(
      std::deque<FakeTransport::Reply>{{std::nullopt, TransportError("HTTP 400", false)}});
  LlmAdapter agent(Role::Agent, test_config(), std::move(transport), [](auto) {});
  auto user = shipped::adapter(scenario, Role::User);
  const auto t = run_session(scenario, agent, user);
  EXPECT_EQ(t.termination, Termination::Aborted);
  EXPECT_NE(t.detail.find("HTTP 400"), std::string::npos);
}

TEST(LlmConfig, JsonRoundTripAndDefaults) {
  const auto c = Json{{"model", "m"}}.get<LlmConfig>();
  EXPECT_EQ(c.endpoint, "https://api.openai.com/v1");
  EXPECT_EQ(c.max_attempts, 3);
  EXPECT_EQ(c.initial_backoff, std::chrono::milliseconds{500});
  EXPECT_EQ(Json(c).get<LlmConfig>().model, "m");
  EXPECT_THROW((Json{{"model", "m"}, {"max_attempts", 0}}.get<LlmConfig>()), std::invalid_argument);
}

TEST(Prompts, UserContextFillsGoalAndBoundary) {
  UserSpec spec;
  spec.goal = "Buy milk";
  spec.knowledge_boundary = "You do not know the store hours.";
  const auto text = render_user_context(spec);
  EXPECT_NE(text.find("Buy milk"), std::string::npos);
  EXPECT_NE(text.find("You do not know the store hours."), std::string::npos);
  EXPECT_EQ(text.find("{{"), std::string::npos);
  EXPECT_FALSE(agent_system_prompt().empty());
}
