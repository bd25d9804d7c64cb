#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace toolsim {

enum class ToolErrorKind { ConnectionError, PermissionError, ValueError, KeyError, NoMatchError };

std::string_view to_string(ToolErrorKind kind);

/// Raised by tool implementations; the message names the failed precondition.
class ToolError : public std::runtime_error {
 public:
  ToolError(ToolErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  ToolErrorKind kind() const { return kind_; }

 private:
  ToolErrorKind kind_;
};

}  // namespace toolsim
