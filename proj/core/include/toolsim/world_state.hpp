#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toolsim/message.hpp"

namespace toolsim {

/// Device settings. These four flags carry every state dependency in the catalog.
struct SettingsState {
  bool cellular = true;
  bool wifi = true;
  bool location_service = true;
  bool low_battery_mode = false;

  friend bool operator==(const SettingsState&, const SettingsState&) = default;
};

struct ContactRecord {
  std::string id;
  std::string name;
  std::string phone_number;
  std::optional<std::string> relationship;
  bool is_self = false;

  friend bool operator==(const ContactRecord&, const ContactRecord&) = default;
};

struct MessageRecord {
  std::string id;
  std::string phone_number;
  std::string content;
  std::int64_t created_at = 0;

  friend bool operator==(const MessageRecord&, const MessageRecord&) = default;
};

struct ReminderRecord {
  std::string id;
  std::string content;
  std::int64_t reminder_timestamp = 0;
  std::optional<double> latitude;
  std::optional<double> longitude;

  friend bool operator==(const ReminderRecord&, const ReminderRecord&) = default;
};

/// Appended once per executed call and never modified afterwards.
struct ToolTrace {
  int turn_index = 0;
  std::string tool_name;
  Json arguments = Json::object();
  ToolOutcome outcome;
  /// `name(arg=value, ...)` rendering of the call as it was dispatched.
  std::string canonical_call;

  friend bool operator==(const ToolTrace&, const ToolTrace&) = default;
};

struct GeoPoint {
  double latitude = 0.0;
  double longitude = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

enum class Database : std::uint8_t { Settings, Contacts, Messages, Reminders };

std::string_view to_string(Database db);
/// Throws std::invalid_argument for an unknown database name.
Database parse_database(std::string_view name);

struct WorldState {
  SettingsState settings;
  std::vector<ContactRecord> contacts;
  std::vector<MessageRecord> messages;
  std::vector<ReminderRecord> reminders;
  std::int64_t clock_timestamp = 0;
  GeoPoint current_location;
  std::vector<ToolTrace> traces;

  // Per-database id counters; ids are "<domain>-<counter>".
  std::uint64_t next_contact_id = 1;
  std::uint64_t next_message_id = 1;
  std::uint64_t next_reminder_id = 1;

  std::string allocate_id(Database db);

  /// Rows of a database as JSON objects, in storage order. Settings is a single row.
  Json rows(Database db) const;

  bool same_database(const WorldState& other, Database db) const;

  /// Bumps counters past any "<domain>-<n>" ids already present (used after seeding).
  void sync_id_counters();

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

struct Snapshot {
  int turn_index = 0;
  WorldState state;
  Message message;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

/// Deep copy of the live state, paired with the message that produced this turn.
Snapshot take_snapshot(const WorldState& state, int turn, const Message& message);

/// True iff `db` is value-equal in every snapshot whose turn lies in [from_turn, to_turn].
/// Turns are 1-based indices into `trajectory`. Throws std::out_of_range for bad turns.
bool db_unchanged_between(std::span<const Snapshot> trajectory, int from_turn, int to_turn, Database db);
bool db_unchanged_between(std::span<const Snapshot> trajectory, int from_turn, int to_turn,
                          std::string_view db_name);

void to_json(Json& j, const SettingsState& s);
void from_json(const Json& j, SettingsState& s);
void to_json(Json& j, const ContactRecord& r);
void from_json(const Json& j, ContactRecord& r);
void to_json(Json& j, const MessageRecord& r);
void from_json(const Json& j, MessageRecord& r);
void to_json(Json& j, const ReminderRecord& r);
void from_json(const Json& j, ReminderRecord& r);
void to_json(Json& j, const ToolTrace& t);
void from_json(const Json& j, ToolTrace& t);
void to_json(Json& j, const GeoPoint& p);
void from_json(const Json& j, GeoPoint& p);

/// Snapshot records carry exactly: turn_index, settings, contacts, messages,
/// reminders, traces, message.
void to_json(Json& j, const Snapshot& s);
void from_json(const Json& j, Snapshot& s);

/// Initial world description as used in scenario files (databases, clock, location).
Json world_to_json(const WorldState& state);
WorldState world_from_json(const Json& j);

}  // namespace toolsim
