#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "shipped.hpp"
#include "toolsim/session.hpp"
#include "toolsim/trajectory.hpp"

using namespace toolsim;

namespace {

Trajectory golden_run(const std::string& id) {
  const auto s = shipped::scenario(id);
  auto agent = shipped::adapter(s, Role::Agent);
  auto user = shipped::adapter(s, Role::User);
  return run_session(s, agent, user, SessionConfig{std::nullopt, 99});
}

}  // namespace

TEST(Trajectory, RoundTripsThroughTheLineFormat) {
  for (const auto* id : {"send_message_cellular_off", "low_battery_nested", "stock_price_apple_tds_ads"}) {
    const auto t = golden_run(id);
    std::ostringstream out;
    write_trajectory(out, t);
    std::istringstream in(out.str());
    const auto back = read_trajectory(in);
    // Clock, location and id counters are not persisted, so equality is
    // checked on everything the format carries.
    EXPECT_EQ(back.messages(), t.messages()) << id;
    EXPECT_EQ(back.termination, t.termination) << id;
    EXPECT_EQ(back.seed, t.seed) << id;
    ASSERT_EQ(back.snapshots.size(), t.snapshots.size());
    for (std::size_t i = 0; i < t.snapshots.size(); ++i) {
      EXPECT_EQ(back.snapshots[i].state.settings, t.snapshots[i].state.settings);
      EXPECT_EQ(back.snapshots[i].state.contacts, t.snapshots[i].state.contacts);
      EXPECT_EQ(back.snapshots[i].state.traces, t.snapshots[i].state.traces);
    }
    std::ostringstream again;
    write_trajectory(again, back);
    EXPECT_EQ(again.str(), out.str()) << id;
  }
}

TEST(Trajectory, LineStructure) {
  const auto t = golden_run("currency_usd_to_eur");
  std::ostringstream out;
  write_trajectory(out, t);
  std::istringstream in(out.str());
  std::vector<Json> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(Json::parse(line));
  ASSERT_EQ(lines.size(), t.snapshots.size() + 2);
  EXPECT_EQ(lines.front()["record"], "header");
  EXPECT_EQ(lines.front()["seed"], 99);
  EXPECT_EQ(lines.front()["agent"], "scripted:golden");
  EXPECT_EQ(lines[1]["record"], "turn");
  EXPECT_EQ(lines[1]["turn_index"], 1);
  EXPECT_EQ(lines.back()["record"], "end");
  EXPECT_EQ(lines.back()["termination"], "end_conversation");
  EXPECT_EQ(lines.back()["turn_count"], 6);
}

TEST(Trajectory, MessagesFollowSnapshots) {
  const auto t = golden_run("send_message_cellular_off");
  const auto messages = t.messages();
  ASSERT_EQ(messages.size(), t.snapshots.size());
  for (std::size_t i = 0; i < messages.size(); ++i) {
    EXPECT_EQ(messages[i].turn_index, static_cast<int>(i) + 1);
    EXPECT_EQ(messages[i], t.snapshots[i].message);
  }
}

TEST(Trajectory, RejectsDamagedInput) {
  const auto t = golden_run("currency_usd_to_eur");
  std::ostringstream out;
  write_trajectory(out, t);
  const auto text = out.str();

  std::istringstream empty("");
  EXPECT_THROW(read_trajectory(empty), std::exception);

  // Drop the end record.
  const auto without_end = text.substr(0, text.rfind('\n', text.size() - 2) + 1);
  std::istringstream truncated(without_end);
  EXPECT_THROW(read_trajectory(truncated), std::exception);

  std::istringstream garbage(text.substr(0, text.find('\n') + 1) + "not json\n");
  EXPECT_THROW(read_trajectory(garbage), std::exception);
}

TEST(Trajectory, SaveAndLoad) {
  const auto t = golden_run("weather_golden_gate");
  const auto file = std::filesystem::temp_directory_path() / "toolsim_trajectory_test.jsonl";
  save_trajectory(t, file);
  std::ostringstream expected, actual;
  write_trajectory(expected, t);
  write_trajectory(actual, load_trajectory(file));
  EXPECT_EQ(actual.str(), expected.str());
  std::filesystem::remove(file);
  EXPECT_THROW(load_trajectory(file), std::exception);
}
