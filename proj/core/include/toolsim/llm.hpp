#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>

#include "toolsim/adapter.hpp"

namespace toolsim {

/// Connection settings for an OpenAI-compatible chat-completions endpoint.
struct LlmConfig {
  std::string endpoint = "https://api.openai.com/v1";  // "/chat/completions" is appended
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";  // name of the variable holding the key
  double temperature = 0.0;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};  // doubled after each failed attempt
  std::chrono::seconds timeout{120};
};

void to_json(Json& j, const LlmConfig& c);
void from_json(const Json& j, LlmConfig& c);

/// Reads a JSON config file, then applies TOOLSIM_LLM_ENDPOINT and
/// TOOLSIM_LLM_MODEL from the environment when they are set.
LlmConfig load_llm_config(const std::string& path);

class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string& message, bool retryable) : std::runtime_error(message), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

/// Sends one chat-completions request body and returns the parsed response body.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual Json complete(const Json& request) = 0;  // throws TransportError
};

/// HTTP(S) transport. HTTPS needs the library to be built with OpenSSL.
std::unique_ptr<ChatTransport> make_http_transport(const LlmConfig& config);

/// Maps a role's view to chat messages from that role's point of view: its own
/// messages become "assistant" turns (with tool_calls for batches), the other
/// party's text becomes "user", each tool result becomes one "tool" message and
/// the user simulator's private context becomes a "system" message.
Json to_chat_messages(Role self, std::span<const Message> view, std::string_view system_prompt);

/// Request body: model, messages, temperature, seed and the tools as functions.
Json build_chat_request(const LlmConfig& config, Role self, const StepContext& context, std::string_view system_prompt);

/// Reads choices[0].message. Tool calls take precedence over prose. Malformed
/// output (bad argument JSON, empty message) becomes a text reply describing
/// the problem so the conversation can recover.
RoleOutput parse_chat_response(const Json& response);

class LlmAdapter : public RoleAdapter {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  LlmAdapter(Role role, LlmConfig config, std::unique_ptr<ChatTransport> transport, Sleeper sleeper = {});

  std::string identity() const override { return "llm:" + config_.model; }
  std::optional<RoleOutput> step(const StepContext& context) override;

 private:
  Role role_;
  LlmConfig config_;
  std::unique_ptr<ChatTransport> transport_;
  Sleeper sleeper_;
};

}  // namespace toolsim
