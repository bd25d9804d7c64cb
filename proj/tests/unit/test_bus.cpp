#include <gtest/gtest.h>

#include "toolsim/bus.hpp"

using namespace toolsim;

namespace {

Message text(Role from, Role to, std::string body, RoleSet visible = {}) {
  return Message{0, from, to, std::move(body), visible};
}

}  // namespace

TEST(MessageBus, StampsDenseTurnIndices) {
  MessageBus bus;
  bus.append(text(Role::User, Role::Agent, "hi"));
  bus.append(text(Role::Agent, Role::User, "hello"));
  ASSERT_EQ(bus.size(), 2u);
  EXPECT_EQ(bus.messages()[0].turn_index, 1);
  EXPECT_EQ(bus.messages()[1].turn_index, 2);
}

TEST(MessageBus, DefaultVisibilityIsSenderAndRecipient) {
  MessageBus bus;
  const auto& m = bus.append(text(Role::Agent, Role::ExecutionEnvironment, "x"));
  EXPECT_EQ(m.visible_to, (RoleSet{Role::Agent, Role::ExecutionEnvironment}));
}

TEST(MessageBus, RejectsSelfAddressedAndHiddenFromSender) {
  MessageBus bus;
  EXPECT_THROW(bus.append(text(Role::User, Role::User, "x")), std::invalid_argument);
  EXPECT_THROW(bus.append(text(Role::Agent, Role::User, "x", RoleSet{Role::User, Role::ExecutionEnvironment})),
               std::invalid_argument);
  EXPECT_TRUE(bus.empty());
}

TEST(MessageBus, UserOnlyMessagesMayHideTheirSender) {
  MessageBus bus;
  bus.append(text(Role::ExecutionEnvironment, Role::User, "context", RoleSet{Role::User}));
  bus.append(text(Role::Agent, Role::User, "demo", RoleSet{Role::User}));
  EXPECT_EQ(bus.size(), 2u);
}

TEST(MessageBus, NextSpeakerIsLastRecipient) {
  MessageBus bus;
  EXPECT_FALSE(bus.next_speaker().has_value());
  bus.append(text(Role::User, Role::Agent, "hi"));
  EXPECT_EQ(bus.next_speaker(), Role::Agent);
  bus.append(Message{0, Role::Agent, Role::ExecutionEnvironment, ToolCallBatch{{"c1", "get_wifi_status", {}, 0}}, {}});
  EXPECT_EQ(bus.next_speaker(), Role::ExecutionEnvironment);
}

TEST(MessageBus, ViewsFilterByVisibility) {
  MessageBus bus;
  bus.append(text(Role::ExecutionEnvironment, Role::User, "context", RoleSet{Role::User}));
  bus.append(text(Role::User, Role::Agent, "demo", RoleSet{Role::User}));
  bus.append(text(Role::Agent, Role::User, "demo reply", RoleSet{Role::User}));
  bus.append(text(Role::User, Role::Agent, "real"));
  bus.append(Message{0, Role::Agent, Role::ExecutionEnvironment, ToolCallBatch{{"c1", "get_wifi_status", {}, 0}}, {}});

  const auto agent = bus.view_for(Role::Agent);
  ASSERT_EQ(agent.size(), 2u);
  EXPECT_EQ(*agent[0].text(), "real");
  EXPECT_EQ(bus.view_for(Role::User).size(), 4u);
  EXPECT_EQ(bus.view_for(Role::ExecutionEnvironment).size(), 1u);
}

TEST(TurnCount, SingleExchangeIsTwoTurns) {
  MessageBus bus;
  bus.append(text(Role::User, Role::Agent, "What time is it?"));
  bus.append(text(Role::Agent, Role::User, "Noon."));
  EXPECT_EQ(turn_count(bus.messages()), 2);
}

TEST(TurnCount, ExcludesUserOnlyMessagesButCountsToolTraffic) {
  MessageBus bus;
  bus.append(text(Role::ExecutionEnvironment, Role::User, "context", RoleSet{Role::User}));
  bus.append(text(Role::User, Role::Agent, "demo", RoleSet{Role::User}));
  bus.append(text(Role::Agent, Role::User, "demo reply", RoleSet{Role::User}));
  bus.append(text(Role::User, Role::Agent, "Is wifi on?"));
  bus.append(Message{0, Role::Agent, Role::ExecutionEnvironment, ToolCallBatch{{"c1", "get_wifi_status", {}, 0}}, {}});
  bus.append(Message{0, Role::ExecutionEnvironment, Role::Agent,
                     ToolResultBatch{{"c1", "get_wifi_status", ToolOutcome::success(true)}}, {}});
  bus.append(text(Role::Agent, Role::User, "Yes."));
  EXPECT_EQ(turn_count(bus.messages()), 4);
  EXPECT_TRUE(is_user_only(bus.messages()[0]));
  EXPECT_FALSE(is_user_only(bus.messages()[3]));
}
