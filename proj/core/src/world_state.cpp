#include "toolsim/world_state.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace toolsim {

namespace {

std::string_view id_prefix(Database db) {
  switch (db) {
    case Database::Contacts:
      return "contact";
    case Database::Messages:
      return "message";
    case Database::Reminders:
      return "reminder";
    case Database::Settings:
      break;
  }
  throw std::invalid_argument("settings rows have no ids");
}

std::uint64_t id_suffix(std::string_view id, std::string_view prefix) {
  if (id.size() <= prefix.size() + 1 || id.substr(0, prefix.size()) != prefix || id[prefix.size()] != '-') return 0;
  std::uint64_t n = 0;
  auto digits = id.substr(prefix.size() + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return 0;
  return n;
}

template <typename Record>
std::uint64_t max_suffix(const std::vector<Record>& records, std::string_view prefix) {
  std::uint64_t best = 0;
  for (const auto& r : records) best = std::max(best, id_suffix(r.id, prefix));
  return best;
}

template <typename T>
Json optional_to_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> optional_from_json(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace

std::string_view to_string(Database db) {
  switch (db) {
    case Database::Settings:
      return "settings";
    case Database::Contacts:
      return "contacts";
    case Database::Messages:
      return "messages";
    case Database::Reminders:
      return "reminders";
  }
  return "unknown";
}

Database parse_database(std::string_view name) {
  if (name == "settings") return Database::Settings;
  if (name == "contacts") return Database::Contacts;
  if (name == "messages") return Database::Messages;
  if (name == "reminders") return Database::Reminders;
  throw std::invalid_argument("unknown database '" + std::string(name) + "'");
}

std::string WorldState::allocate_id(Database db) {
  std::uint64_t* counter = nullptr;
  switch (db) {
    case Database::Contacts:
      counter = &next_contact_id;
      break;
    case Database::Messages:
      counter = &next_message_id;
      break;
    case Database::Reminders:
      counter = &next_reminder_id;
      break;
    case Database::Settings:
      throw std::invalid_argument("settings rows have no ids");
  }
  return std::string(id_prefix(db)) + "-" + std::to_string((*counter)++);
}

void WorldState::sync_id_counters() {
  next_contact_id = std::max(next_contact_id, max_suffix(contacts, "contact") + 1);
  next_message_id = std::max(next_message_id, max_suffix(messages, "message") + 1);
  next_reminder_id = std::max(next_reminder_id, max_suffix(reminders, "reminder") + 1);
}

Json WorldState::rows(Database db) const {
  switch (db) {
    case Database::Settings:
      return Json::array({Json(settings)});
    case Database::Contacts:
      return Json(contacts);
    case Database::Messages:
      return Json(messages);
    case Database::Reminders:
      return Json(reminders);
  }
  return Json::array();
}

bool WorldState::same_database(const WorldState& other, Database db) const {
  switch (db) {
    case Database::Settings:
      return settings == other.settings;
    case Database::Contacts:
      return contacts == other.contacts;
    case Database::Messages:
      return messages == other.messages;
    case Database::Reminders:
      return reminders == other.reminders;
  }
  return false;
}

Snapshot take_snapshot(const WorldState& state, int turn, const Message& message) {
  return Snapshot{turn, state, message};
}

bool db_unchanged_between(std::span<const Snapshot> trajectory, int from_turn, int to_turn, Database db) {
  if (from_turn > to_turn) std::swap(from_turn, to_turn);
  if (from_turn < 1 || static_cast<std::size_t>(to_turn) > trajectory.size()) {
    throw std::out_of_range("turn interval [" + std::to_string(from_turn) + ", " + std::to_string(to_turn) +
                            "] outside trajectory of " + std::to_string(trajectory.size()) + " turns");
  }
  const auto& first = trajectory[static_cast<std::size_t>(from_turn - 1)].state;
  for (int t = from_turn + 1; t <= to_turn; ++t) {
    if (!first.same_database(trajectory[static_cast<std::size_t>(t - 1)].state, db)) return false;
  }
  return true;
}

bool db_unchanged_between(std::span<const Snapshot> trajectory, int from_turn, int to_turn,
                          std::string_view db_name) {
  return db_unchanged_between(trajectory, from_turn, to_turn, parse_database(db_name));
}

void to_json(Json& j, const SettingsState& s) {
  j = Json{{"cellular", s.cellular},
           {"wifi", s.wifi},
           {"location_service", s.location_service},
           {"low_battery_mode", s.low_battery_mode}};
}

void from_json(const Json& j, SettingsState& s) {
  SettingsState defaults;
  s.cellular = j.value("cellular", defaults.cellular);
  s.wifi = j.value("wifi", defaults.wifi);
  s.location_service = j.value("location_service", defaults.location_service);
  s.low_battery_mode = j.value("low_battery_mode", defaults.low_battery_mode);
}

void to_json(Json& j, const ContactRecord& r) {
  j = Json{{"person_id", r.id},
           {"name", r.name},
           {"phone_number", r.phone_number},
           {"relationship", optional_to_json(r.relationship)},
           {"is_self", r.is_self}};
}

void from_json(const Json& j, ContactRecord& r) {
  r.id = j.value("person_id", std::string{});
  r.name = j.at("name").get<std::string>();
  r.phone_number = j.at("phone_number").get<std::string>();
  r.relationship = optional_from_json<std::string>(j, "relationship");
  r.is_self = j.value("is_self", false);
}

void to_json(Json& j, const MessageRecord& r) {
  j = Json{{"message_id", r.id}, {"phone_number", r.phone_number}, {"content", r.content}, {"created_at", r.created_at}};
}

void from_json(const Json& j, MessageRecord& r) {
  r.id = j.value("message_id", std::string{});
  r.phone_number = j.at("phone_number").get<std::string>();
  r.content = j.at("content").get<std::string>();
  r.created_at = j.value("created_at", std::int64_t{0});
}

void to_json(Json& j, const ReminderRecord& r) {
  j = Json{{"reminder_id", r.id},
           {"content", r.content},
           {"reminder_timestamp", r.reminder_timestamp},
           {"latitude", optional_to_json(r.latitude)},
           {"longitude", optional_to_json(r.longitude)}};
}

void from_json(const Json& j, ReminderRecord& r) {
  r.id = j.value("reminder_id", std::string{});
  r.content = j.at("content").get<std::string>();
  r.reminder_timestamp = j.at("reminder_timestamp").get<std::int64_t>();
  r.latitude = optional_from_json<double>(j, "latitude");
  r.longitude = optional_from_json<double>(j, "longitude");
}

void to_json(Json& j, const ToolTrace& t) {
  j = Json{{"turn_index", t.turn_index},
           {"tool_name", t.tool_name},
           {"arguments", t.arguments},
           {"outcome", t.outcome},
           {"canonical_call", t.canonical_call}};
}

void from_json(const Json& j, ToolTrace& t) {
  t.turn_index = j.at("turn_index").get<int>();
  t.tool_name = j.at("tool_name").get<std::string>();
  t.arguments = j.value("arguments", Json::object());
  t.outcome = j.at("outcome").get<ToolOutcome>();
  t.canonical_call = j.value("canonical_call", std::string{});
}

void to_json(Json& j, const GeoPoint& p) { j = Json{{"latitude", p.latitude}, {"longitude", p.longitude}}; }

void from_json(const Json& j, GeoPoint& p) {
  p.latitude = j.at("latitude").get<double>();
  p.longitude = j.at("longitude").get<double>();
}

void to_json(Json& j, const Snapshot& s) {
  j = Json{{"turn_index", s.turn_index},
           {"settings", s.state.settings},
           {"contacts", s.state.contacts},
           {"messages", s.state.messages},
           {"reminders", s.state.reminders},
           {"traces", s.state.traces},
           {"message", s.message}};
}

void from_json(const Json& j, Snapshot& s) {
  s.turn_index = j.at("turn_index").get<int>();
  s.state = WorldState{};
  s.state.settings = j.at("settings").get<SettingsState>();
  s.state.contacts = j.at("contacts").get<std::vector<ContactRecord>>();
  s.state.messages = j.at("messages").get<std::vector<MessageRecord>>();
  s.state.reminders = j.at("reminders").get<std::vector<ReminderRecord>>();
  s.state.traces = j.at("traces").get<std::vector<ToolTrace>>();
  s.state.sync_id_counters();
  s.message = j.at("message").get<Message>();
}

Json world_to_json(const WorldState& state) {
  return Json{{"settings", state.settings},
              {"contacts", state.contacts},
              {"messages", state.messages},
              {"reminders", state.reminders},
              {"clock_timestamp", state.clock_timestamp},
              {"current_location", state.current_location}};
}

WorldState world_from_json(const Json& j) {
  WorldState state;
  if (auto it = j.find("settings"); it != j.end()) state.settings = it->get<SettingsState>();
  state.contacts = j.value("contacts", std::vector<ContactRecord>{});
  state.messages = j.value("messages", std::vector<MessageRecord>{});
  state.reminders = j.value("reminders", std::vector<ReminderRecord>{});
  state.clock_timestamp = j.value("clock_timestamp", std::int64_t{0});
  if (auto it = j.find("current_location"); it != j.end()) state.current_location = it->get<GeoPoint>();
  state.sync_id_counters();
  for (auto& c : state.contacts) {
    if (c.id.empty()) c.id = state.allocate_id(Database::Contacts);
  }
  for (auto& m : state.messages) {
    if (m.id.empty()) m.id = state.allocate_id(Database::Messages);
  }
  for (auto& r : state.reminders) {
    if (r.id.empty()) r.id = state.allocate_id(Database::Reminders);
  }
  return state;
}

}  // namespace toolsim
