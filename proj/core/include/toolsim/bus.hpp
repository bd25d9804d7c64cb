#pragma once

#include <optional>
#include <span>
#include <vector>

#include "toolsim/message.hpp"

namespace toolsim {

/// Ordered log of every message exchanged between the roles.
class MessageBus {
 public:
  /// Stamps `turn_index` (1-based, dense) and fills an empty visibility set
  /// with {sender, recipient}. Throws std::invalid_argument if sender ==
  /// recipient or the visibility set omits the sender (user-only messages
  /// are exempt).
  const Message& append(Message message);

  const std::vector<Message>& messages() const { return messages_; }
  std::size_t size() const { return messages_.size(); }
  bool empty() const { return messages_.empty(); }

  /// Messages `role` may read, in bus order.
  std::vector<Message> view_for(Role role) const;

  /// The recipient of the last message; std::nullopt on an empty bus.
  std::optional<Role> next_speaker() const;

 private:
  std::vector<Message> messages_;
};

std::vector<Message> view_for(std::span<const Message> messages, Role role);

/// True for messages only the user simulator can see (its context and demonstrations).
bool is_user_only(const Message& m);

/// Messages on the bus, not counting user-only context and demonstrations.
int turn_count(std::span<const Message> messages);

}  // namespace toolsim
