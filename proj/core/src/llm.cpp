#include "toolsim/llm.hpp"

#include <cstdlib>
#include <fstream>
#include <thread>

#include "toolsim/prompts.hpp"

namespace toolsim {

namespace {

Json tool_call_json(const ToolCallRequest& call) {
  return Json{{"id", call.call_id},
              {"type", "function"},
              {"function", {{"name", call.tool_name}, {"arguments", call.arguments.dump()}}}};
}

}  // namespace

void to_json(Json& j, const LlmConfig& c) {
  j = Json{{"endpoint", c.endpoint},
           {"model", c.model},
           {"api_key_env", c.api_key_env},
           {"temperature", c.temperature},
           {"max_attempts", c.max_attempts},
           {"initial_backoff_ms", c.initial_backoff.count()},
           {"timeout_s", c.timeout.count()}};
}

void from_json(const Json& j, LlmConfig& c) {
  LlmConfig d;
  c.endpoint = j.value("endpoint", d.endpoint);
  c.model = j.at("model").get<std::string>();
  c.api_key_env = j.value("api_key_env", d.api_key_env);
  c.temperature = j.value("temperature", d.temperature);
  c.max_attempts = j.value("max_attempts", d.max_attempts);
  c.initial_backoff = std::chrono::milliseconds(j.value("initial_backoff_ms", d.initial_backoff.count()));
  c.timeout = std::chrono::seconds(j.value("timeout_s", d.timeout.count()));
  if (c.max_attempts < 1) throw std::invalid_argument("max_attempts must be at least 1");
}

LlmConfig load_llm_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open LLM config " + path);
  Json j = Json::parse(in);
  if (const char* endpoint = std::getenv("TOOLSIM_LLM_ENDPOINT")) j["endpoint"] = endpoint;
  if (const char* model = std::getenv("TOOLSIM_LLM_MODEL")) j["model"] = model;
  return j.get<LlmConfig>();
}

Json to_chat_messages(Role self, std::span<const Message> view, std::string_view system_prompt) {
  Json out = Json::array();
  if (!system_prompt.empty()) out.push_back(Json{{"role", "system"}, {"content", system_prompt}});
  for (const auto& m : view) {
    if (const auto* text = m.text()) {
      if (m.sender == self) {
        out.push_back(Json{{"role", "assistant"}, {"content", *text}});
      } else if (m.sender == Role::ExecutionEnvironment) {
        out.push_back(Json{{"role", "system"}, {"content", *text}});
      } else {
        out.push_back(Json{{"role", "user"}, {"content", *text}});
      }
    } else if (const auto* calls = m.tool_calls()) {
      Json tool_calls = Json::array();
      for (const auto& c : *calls) tool_calls.push_back(tool_call_json(c));
      out.push_back(Json{{"role", "assistant"}, {"content", nullptr}, {"tool_calls", tool_calls}});
    } else {
      for (const auto& r : *m.tool_results()) {
        out.push_back(Json{{"role", "tool"}, {"tool_call_id", r.call_id}, {"content", describe_outcome(r.outcome)}});
      }
    }
  }
  return out;
}

Json build_chat_request(const LlmConfig& config, Role self, const StepContext& context, std::string_view system_prompt) {
  Json request{{"model", config.model},
               {"messages", to_chat_messages(self, context.view, system_prompt)},
               {"temperature", config.temperature},
               {"seed", context.seed}};
  if (!context.tools.empty()) {
    Json tools = Json::array();
    for (const auto& t : context.tools) tools.push_back(Json{{"type", "function"}, {"function", t}});
    request["tools"] = tools;
  }
  return request;
}

RoleOutput parse_chat_response(const Json& response) {
  const Json* message = nullptr;
  if (response.is_object()) {
    auto choices = response.find("choices");
    if (choices != response.end() && choices->is_array() && !choices->empty()) {
      auto it = choices->front().find("message");
      if (it != choices->front().end() && it->is_object()) message = &*it;
    }
  }
  if (message == nullptr) return std::string("[model output could not be parsed: no choices[0].message]");

  if (auto calls = message->find("tool_calls"); calls != message->end() && calls->is_array() && !calls->empty()) {
    ToolCallBatch batch;
    for (const auto& c : *calls) {
      const auto fn = c.value("function", Json::object());
      const auto name = fn.value("name", std::string{});
      if (name.empty()) return std::string("[model output could not be parsed: tool call without a function name]");
      ToolCallRequest call;
      call.call_id = c.value("id", std::string{});
      call.tool_name = name;
      call.batch_position = static_cast<int>(batch.size());
      const auto raw = fn.value("arguments", Json(""));
      if (raw.is_object()) {
        call.arguments = raw;
      } else {
        const auto text = raw.is_string() ? raw.get<std::string>() : raw.dump();
        try {
          call.arguments = text.empty() ? Json::object() : Json::parse(text);
        } catch (const Json::parse_error& e) {
          return std::string("[model output could not be parsed: arguments of '" + name + "' are not valid JSON: " +
                             e.what() + "]");
        }
      }
      batch.push_back(std::move(call));
    }
    return batch;
  }
  if (auto content = message->find("content"); content != message->end() && content->is_string() &&
                                               !content->get<std::string>().empty()) {
    return content->get<std::string>();
  }
  return std::string("[model output could not be parsed: empty message]");
}

LlmAdapter::LlmAdapter(Role role, LlmConfig config, std::unique_ptr<ChatTransport> transport, Sleeper sleeper)
    : role_(role), config_(std::move(config)), transport_(std::move(transport)), sleeper_(std::move(sleeper)) {
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (!transport_) throw std::invalid_argument("LlmAdapter needs a transport");
}

std::optional<RoleOutput> LlmAdapter::step(const StepContext& context) {
  const std::string_view system = role_ == Role::Agent ? agent_system_prompt() : std::string_view{};
  const Json request = build_chat_request(config_, role_, context, system);
  auto backoff = config_.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return parse_chat_response(transport_->complete(request));
    } catch (const TransportError& e) {
      if (!e.retryable() || attempt >= config_.max_attempts) {
        throw AdapterError("chat request failed after " + std::to_string(attempt) + " attempt(s): " + e.what());
      }
    }
    sleeper_(backoff);
    backoff *= 2;
  }
}

}  // namespace toolsim
