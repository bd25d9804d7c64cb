#include <gtest/gtest.h>

#include <ctime>
#include <random>

#include "oracles.hpp"
#include "toolsim/catalog.hpp"

using namespace toolsim;

namespace {

const Catalog& catalog() { return Catalog::standard(); }

WorldState seeded() {
  WorldState s;
  s.clock_timestamp = 1716533999;  // Friday 2024-05-24 06:59:59 UTC
  s.contacts.push_back({"contact-1", "Fredrik Thordendal", "+12453344098", "friend", false});
  s.contacts.push_back({"contact-2", "Tomas Haake", "+11233344455", std::nullopt, true});
  s.sync_id_counters();
  return s;
}

Json send_args() { return Json{{"phone_number", "+12453344098"}, {"content", "How's it going"}}; }

}  // namespace

TEST(Catalog, ToolNamesAreUniqueAndSorted) {
  const auto schemas = catalog().schemas();
  ASSERT_GT(schemas.size(), 30u);
  for (std::size_t i = 1; i < schemas.size(); ++i) EXPECT_LT(schemas[i - 1].name, schemas[i].name);
  const auto agent = catalog().agent_schemas();
  EXPECT_EQ(agent.size() + 1, schemas.size());
  for (const auto& s : agent) EXPECT_NE(s.name, kEndConversation);
}

TEST(Catalog, RenderedSchemasRoundTrip) {
  for (const auto& schema : catalog().schemas()) {
    const auto parsed = parse_rendered_schema(render_schema(schema));
    EXPECT_EQ(parsed.name, schema.name);
    EXPECT_EQ(parsed.description, schema.description);
    ASSERT_EQ(parsed.args.size(), schema.args.size()) << schema.name;
    for (const auto& arg : schema.args) {
      const auto* p = parsed.find_arg(arg.name);
      ASSERT_NE(p, nullptr);
      EXPECT_EQ(*p, arg) << schema.name << "." << arg.name;
    }
  }
}

TEST(Catalog, SendMessageNeedsCellular) {
  auto s = seeded();
  s.settings.cellular = false;
  auto out = catalog().execute("send_message", send_args(), s, 3);
  EXPECT_FALSE(out.ok);
  EXPECT_EQ(out.error_kind, "ConnectionError");
  EXPECT_EQ(out.error_message, "cellular service is not on");
  EXPECT_TRUE(s.messages.empty());
  ASSERT_EQ(s.traces.size(), 1u);
  EXPECT_EQ(s.traces[0].turn_index, 3);

  s.settings.cellular = true;
  out = catalog().execute("send_message", send_args(), s, 5);
  ASSERT_TRUE(out.ok) << out.error_message;
  ASSERT_EQ(s.messages.size(), 1u);
  EXPECT_EQ(s.messages[0].created_at, s.clock_timestamp);
  EXPECT_EQ(s.messages[0].id, "message-1");
}

// Every (tool, flag) dependency the catalog declares is enforced with the
// declared error kind, and the tool succeeds once the flag is repaired.
TEST(Catalog, DependencyMatrix) {
  struct Case {
    std::string tool;
    Json args;
    bool SettingsState::*flag;
    bool violating;
    std::string kind;
  };
  const std::vector<Case> cases{
      {"send_message", send_args(), &SettingsState::cellular, false, "ConnectionError"},
      {"search_location", {{"location", "Golden Gate"}}, &SettingsState::wifi, false, "ConnectionError"},
      {"search_stock", {{"query", "AAPL"}}, &SettingsState::wifi, false, "ConnectionError"},
      {"search_holiday", {{"holiday_name", "Christmas"}}, &SettingsState::wifi, false, "ConnectionError"},
      {"convert_currency", {{"amount", 10}, {"from_currency_code", "USD"}, {"to_currency_code", "EUR"}},
       &SettingsState::wifi, false, "ConnectionError"},
      {"search_weather_around_lat_lon", {{"latitude", 37.8}, {"longitude", -122.4}}, &SettingsState::wifi, false,
       "ConnectionError"},
      {"get_current_location", Json::object(), &SettingsState::location_service, false, "PermissionError"},
      {"set_cellular_service_status", {{"on", true}}, &SettingsState::low_battery_mode, true, "PermissionError"},
      {"set_wifi_status", {{"on", true}}, &SettingsState::low_battery_mode, true, "PermissionError"},
      {"set_location_service_status", {{"on", true}}, &SettingsState::low_battery_mode, true, "PermissionError"},
  };
  for (const auto& c : cases) {
    auto bad = seeded();
    bad.settings.*c.flag = c.violating;
    auto out = catalog().execute(c.tool, c.args, bad, 1);
    EXPECT_FALSE(out.ok) << c.tool;
    EXPECT_EQ(out.error_kind, c.kind) << c.tool;

    auto good = seeded();
    good.settings.*c.flag = !c.violating;
    out = catalog().execute(c.tool, c.args, good, 1);
    EXPECT_TRUE(out.ok) << c.tool << ": " << out.error_message;
  }
}

TEST(Catalog, TurningServicesOffIsAllowedInLowBatteryMode) {
  auto s = seeded();
  s.settings.low_battery_mode = true;
  EXPECT_TRUE(catalog().execute("set_wifi_status", {{"on", false}}, s, 1).ok);
}

TEST(Catalog, LowBatteryModeTurnsServicesOff) {
  auto s = seeded();
  ASSERT_TRUE(catalog().execute("set_low_battery_mode_status", {{"on", true}}, s, 1).ok);
  EXPECT_FALSE(s.settings.cellular);
  EXPECT_FALSE(s.settings.wifi);
  EXPECT_FALSE(s.settings.location_service);
}

TEST(Catalog, ValidationFailuresAreTraced) {
  auto s = seeded();
  auto out = catalog().execute("send_message", {{"phone_number", "+1"}}, s, 2);
  EXPECT_EQ(out.error_kind, "MissingArgument");
  out = catalog().execute("send_message", {{"phone_number", 5}, {"content", "x"}}, s, 2);
  EXPECT_EQ(out.error_kind, "WrongType");
  out = catalog().execute("send_message", {{"phone_number", "+1"}, {"content", "x"}, {"urgent", true}}, s, 2);
  EXPECT_EQ(out.error_kind, "UnknownArgument");
  out = catalog().execute("teleport", Json::object(), s, 2);
  EXPECT_EQ(out.error_kind, "UnknownTool");
  EXPECT_EQ(s.traces.size(), 4u);
  EXPECT_TRUE(s.messages.empty());
}

TEST(Catalog, TraceRecordsArgumentsWithoutDefaults) {
  auto s = seeded();
  ASSERT_TRUE(catalog().execute("shift_timestamp", {{"timestamp", 100.0}, {"days", 1}}, s, 1).ok);
  EXPECT_EQ(s.traces.back().arguments, (Json{{"timestamp", 100}, {"days", 1}}));
  EXPECT_EQ(s.traces.back().outcome.value, 86500);
  EXPECT_EQ(s.traces.back().canonical_call, "shift_timestamp(days=1, timestamp=100)");
}

TEST(Catalog, SearchContactsNormalizesPhoneNumbers) {
  auto s = seeded();
  auto out = catalog().execute("search_contacts", {{"phone_number", "+1 (245) 334-4098"}}, s, 1);
  ASSERT_TRUE(out.ok);
  ASSERT_EQ(out.value.size(), 1u);
  EXPECT_EQ(out.value[0]["name"], "Fredrik Thordendal");
  out = catalog().execute("search_contacts", {{"name", "nobody"}}, s, 1);
  EXPECT_EQ(out.error_kind, "NoMatchError");
}

TEST(Catalog, KnowledgeLookups) {
  auto s = seeded();
  auto out = catalog().execute("search_stock", {{"query", "aapl"}}, s, 1);
  ASSERT_TRUE(out.ok);
  out = catalog().execute("search_holiday", {{"holiday_name", "christmas"}}, s, 1);
  ASSERT_TRUE(out.ok) << out.error_message;
  EXPECT_EQ(out.value, 1735084800);
  out = catalog().execute("search_location", {{"location", "Golden Gate"}}, s, 1);
  ASSERT_TRUE(out.ok);
  EXPECT_EQ(out.value[0]["latitude"], 37.8199);
  out = catalog().execute("convert_currency", {{"amount", 100}, {"from_currency_code", "USD"}, {"to_currency_code", "EUR"}},
                          s, 1);
  ASSERT_TRUE(out.ok);
  EXPECT_DOUBLE_EQ(out.value.get<double>(), 92.15);
}

TEST(Catalog, UnitConversion) {
  auto s = seeded();
  auto out = catalog().execute("unit_conversion", {{"amount", 212}, {"from_unit", "F"}, {"to_unit", "celsius"}}, s, 1);
  ASSERT_TRUE(out.ok);
  EXPECT_NEAR(out.value.get<double>(), 100.0, 1e-9);
  out = catalog().execute("unit_conversion", {{"amount", 1}, {"from_unit", "miles"}, {"to_unit", "km"}}, s, 1);
  ASSERT_TRUE(out.ok);
  EXPECT_NEAR(out.value.get<double>(), 1.609344, 1e-9);
  out = catalog().execute("unit_conversion", {{"amount", 1}, {"from_unit", "kg"}, {"to_unit", "mile"}}, s, 1);
  EXPECT_EQ(out.error_kind, "ValueError");
}

TEST(Catalog, EndConversationIsUserOnly) {
  const auto* def = catalog().find(kEndConversation);
  ASSERT_NE(def, nullptr);
  EXPECT_TRUE(def->user_only);
}

TEST(Murphy, ReadsSeePreBatchState) {
  for (int repeat = 0; repeat < 20; ++repeat) {
    auto s = seeded();
    s.settings.cellular = false;
    const std::vector<NamedCall> batch{{"set_cellular_service_status", {{"on", true}}}, {"send_message", send_args()}};
    const auto out = execute_batch(catalog(), batch, s, 4);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_TRUE(out[0].ok);
    EXPECT_EQ(out[1].error_kind, "ConnectionError");
    EXPECT_TRUE(s.settings.cellular);
    EXPECT_TRUE(s.messages.empty());
    ASSERT_EQ(s.traces.size(), 2u);
    EXPECT_EQ(s.traces[0].tool_name, "set_cellular_service_status");
    EXPECT_EQ(s.traces[1].tool_name, "send_message");
  }
}

TEST(Murphy, WritesCommitInBatchOrder) {
  auto s = seeded();
  const std::vector<NamedCall> batch{
      {"add_reminder", {{"content", "a"}, {"reminder_timestamp", 1}}},
      {"add_reminder", {{"content", "b"}, {"reminder_timestamp", 2}}},
  };
  const auto out = execute_batch(catalog(), batch, s, 1);
  ASSERT_TRUE(out[0].ok && out[1].ok);
  ASSERT_EQ(s.reminders.size(), 2u);
  EXPECT_EQ(s.reminders[0].content, "a");
  EXPECT_EQ(s.reminders[0].id, "reminder-1");
  EXPECT_EQ(s.reminders[1].id, "reminder-2");
}

TEST(Murphy, SiblingRemovalFailsCommitCleanly) {
  auto s = seeded();
  const std::vector<NamedCall> batch{
      {"remove_contact", {{"person_id", "contact-1"}}},
      {"modify_contact", {{"person_id", "contact-1"}, {"name", "Fredrik T"}}},
  };
  const auto out = execute_batch(catalog(), batch, s, 1);
  EXPECT_TRUE(out[0].ok);
  EXPECT_EQ(out[1].error_kind, "KeyError");
  EXPECT_EQ(s.contacts.size(), 1u);
}

TEST(Datetime, RoundTripsAgainstLibc) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> ts(-2208988800LL, 4102444800LL);  // 1900..2100
  static const char* names[] = {"Sunday", "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday"};
  for (int i = 0; i < 5000; ++i) {
    const std::int64_t t = ts(rng);
    const auto info = datetime_from_timestamp(t);
    const std::time_t tt = static_cast<std::time_t>(t);
    std::tm tm{};
    ASSERT_NE(gmtime_r(&tt, &tm), nullptr);
    ASSERT_EQ(info.year, tm.tm_year + 1900);
    ASSERT_EQ(info.month, tm.tm_mon + 1);
    ASSERT_EQ(info.day, tm.tm_mday);
    ASSERT_EQ(info.hour, tm.tm_hour);
    ASSERT_EQ(info.minute, tm.tm_min);
    ASSERT_EQ(info.second, tm.tm_sec);
    ASSERT_EQ(info.weekday, names[tm.tm_wday]);
    ASSERT_EQ(timestamp_from_datetime(info.year, info.month, info.day, info.hour, info.minute, info.second), t);
    ASSERT_EQ(static_cast<std::int64_t>(timegm(&tm)), t);
  }
}

TEST(Datetime, WorkedExample) {
  const auto info = datetime_from_timestamp(1716533999);
  EXPECT_EQ(info.year, 2024);
  EXPECT_EQ(info.month, 5);
  EXPECT_EQ(info.day, 24);
  EXPECT_EQ(info.weekday, "Friday");
  EXPECT_THROW(timestamp_from_datetime(2024, 2, 30, 0, 0, 0), ToolError);
  EXPECT_THROW(timestamp_from_datetime(2024, 13, 1, 0, 0, 0), ToolError);
  EXPECT_EQ(timestamp_from_datetime(2024, 2, 29, 0, 0, 0), 1709164800);
}

TEST(Distance, MatchesAtan2Form) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  for (int i = 0; i < 1000; ++i) {
    const double a = lat(rng), b = lon(rng), c = lat(rng), d = lon(rng);
    ASSERT_NEAR(haversine_km(a, b, c, d), oracle::haversine_km(a, b, c, d), 1e-6);
  }
  // Golden Gate Bridge to Apple Park, roughly 77 km.
  EXPECT_NEAR(haversine_km(37.8199, -122.4786, 37.3349, -122.0090), 67.0, 15.0);
}
