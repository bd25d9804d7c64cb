#include "toolsim/bus.hpp"

#include <algorithm>
#include <stdexcept>

namespace toolsim {

const Message& MessageBus::append(Message message) {
  if (message.sender == message.recipient) {
    throw std::invalid_argument("a message needs distinct sender and recipient, got " +
                                std::string(to_string(message.sender)) + " twice");
  }
  if (message.visible_to.empty()) message.visible_to = RoleSet{message.sender, message.recipient};
  // User-only messages (the private context and demonstrations) are the one
  // case where the nominal sender does not see what it "said".
  if (!message.visible_to.contains(message.sender) && !is_user_only(message)) {
    throw std::invalid_argument("a message must be visible to its sender");
  }
  message.turn_index = static_cast<int>(messages_.size()) + 1;
  messages_.push_back(std::move(message));
  return messages_.back();
}

std::vector<Message> MessageBus::view_for(Role role) const { return toolsim::view_for(messages_, role); }

std::optional<Role> MessageBus::next_speaker() const {
  if (messages_.empty()) return std::nullopt;
  return messages_.back().recipient;
}

std::vector<Message> view_for(std::span<const Message> messages, Role role) {
  std::vector<Message> out;
  std::copy_if(messages.begin(), messages.end(), std::back_inserter(out),
               [role](const Message& m) { return m.visible_to.contains(role); });
  return out;
}

bool is_user_only(const Message& m) { return m.visible_to == RoleSet{Role::User}; }

int turn_count(std::span<const Message> messages) {
  return static_cast<int>(std::count_if(messages.begin(), messages.end(), [](const Message& m) { return !is_user_only(m); }));
}

}  // namespace toolsim
