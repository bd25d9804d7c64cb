#include <httplib.h>

#include <cstdlib>

#include "toolsim/llm.hpp"

namespace toolsim {

namespace {

class HttpChatTransport : public ChatTransport {
 public:
  explicit HttpChatTransport(const LlmConfig& config) : config_(config) {
    const auto scheme_end = config.endpoint.find("://");
    if (scheme_end == std::string::npos) throw std::invalid_argument("endpoint needs a scheme: " + config.endpoint);
    const auto path_start = config.endpoint.find('/', scheme_end + 3);
    origin_ = config.endpoint.substr(0, path_start);
    path_ = path_start == std::string::npos ? "" : config.endpoint.substr(path_start);
    while (!path_.empty() && path_.back() == '/') path_.pop_back();
    path_ += "/chat/completions";
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (config.endpoint.rfind("https://", 0) == 0) {
      throw std::invalid_argument("this build has no TLS support; use an http:// endpoint");
    }
#endif
    if (const char* key = std::getenv(config.api_key_env.c_str())) api_key_ = key;
  }

  Json complete(const Json& request) override {
    httplib::Client client(origin_);
    const auto timeout = static_cast<time_t>(config_.timeout.count());
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
    auto res = client.Post(path_, headers, request.dump(), "application/json");
    if (!res) throw TransportError("request to " + origin_ + " failed: " + httplib::to_string(res.error()), true);
    if (res->status == 429 || res->status >= 500) {
      throw TransportError("HTTP " + std::to_string(res->status) + " from " + origin_, true);
    }
    if (res->status != 200) {
      throw TransportError("HTTP " + std::to_string(res->status) + " from " + origin_ + ": " + res->body, false);
    }
    try {
      return Json::parse(res->body);
    } catch (const Json::parse_error& e) {
      throw TransportError(std::string("response is not JSON: ") + e.what(), true);
    }
  }

 private:
  LlmConfig config_;
  std::string origin_;
  std::string path_;
  std::string api_key_;
};

}  // namespace

std::unique_ptr<ChatTransport> make_http_transport(const LlmConfig& config) {
  return std::make_unique<HttpChatTransport>(config);
}

}  // namespace toolsim
