// Contacts, messages and reminders: the three record databases.

#include <algorithm>
#include <cctype>

#include "catalog_internal.hpp"

namespace toolsim::detail {

namespace {

// Keeps digits and a leading '+', so "+1 (555) 010-2000" == "+15550102000".
std::string normalize_phone(std::string_view phone) {
  std::string out;
  for (std::size_t i = 0; i < phone.size(); ++i) {
    const auto c = static_cast<unsigned char>(phone[i]);
    if (std::isdigit(c) || (c == '+' && out.empty())) out.push_back(static_cast<char>(c));
  }
  return out;
}

template <typename Record>
auto find_record(std::vector<Record>& records, const std::string& id) {
  return std::find_if(records.begin(), records.end(), [&](const Record& r) { return r.id == id; });
}

template <typename Record>
const Record* find_record(const std::vector<Record>& records, const std::string& id) {
  auto it = std::find_if(records.begin(), records.end(), [&](const Record& r) { return r.id == id; });
  return it == records.end() ? nullptr : &*it;
}

[[noreturn]] void unknown_id(std::string_view what, const std::string& id) {
  raise(ToolErrorKind::KeyError, "no " + std::string(what) + " with id '" + id + "'");
}

bool has_self_contact(const WorldState& state, const std::string& except_id = {}) {
  return std::any_of(state.contacts.begin(), state.contacts.end(),
                     [&](const ContactRecord& c) { return c.is_self && c.id != except_id; });
}

void check_optional_coordinates(const std::optional<double>& lat, const std::optional<double>& lon) {
  if (lat.has_value() != lon.has_value()) {
    raise(ToolErrorKind::ValueError, "latitude and longitude must be given together");
  }
  if (lat) check_coordinates(*lat, *lon);
}

void add_contact_tools(ToolList& tools) {
  tools.push_back({make_schema("add_contact", "contacts", "Add a new contact to the address book.",
                          {required_arg("name", ArgKind::String, "Full name of the contact."),
                           required_arg("phone_number", ArgKind::String, "Phone number, e.g. +15550102000."),
                           optional_arg("relationship", ArgKind::String, "Relationship to the user, e.g. friend."),
                           optional_arg("is_self", ArgKind::Boolean, "Whether this contact is the user.", false)},
                          "The person_id of the new contact.", {"ValueError"}, {"contacts"}, {"contacts"}),
                   [](const Json& args, const WorldState& pre) -> ToolCommit {
                     const bool is_self = args.value("is_self", false);
                     if (is_self && has_self_contact(pre)) {
                       raise(ToolErrorKind::ValueError, "a contact with is_self=true already exists");
                     }
                     return [args, is_self](WorldState& state) -> Json {
                       if (is_self && has_self_contact(state)) {
                         raise(ToolErrorKind::ValueError, "a contact with is_self=true already exists");
                       }
                       ContactRecord c;
                       c.id = state.allocate_id(Database::Contacts);
                       c.name = args.at("name").get<std::string>();
                       c.phone_number = args.at("phone_number").get<std::string>();
                       c.relationship = opt_string(args, "relationship");
                       c.is_self = is_self;
                       state.contacts.push_back(c);
                       return c.id;
                     };
                   }});

  tools.push_back(
      {make_schema("search_contacts", "contacts",
              "Search contacts by any combination of id, name, phone number, relationship and is_self.",
              {optional_arg("person_id", ArgKind::String, "Exact contact id."),
               optional_arg("name", ArgKind::String, "Case-insensitive substring of the name."),
               optional_arg("phone_number", ArgKind::String, "Phone number; formatting is ignored."),
               optional_arg("relationship", ArgKind::String, "Relationship to the user, case-insensitive."),
               optional_arg("is_self", ArgKind::Boolean, "Whether the contact is the user.")},
              "List of matching contacts.", {"NoMatchError"}, {"contacts"}, {}),
       [](const Json& args, const WorldState& pre) -> ToolCommit {
         const auto id = opt_string(args, "person_id");
         const auto name = opt_string(args, "name");
         const auto phone = opt_string(args, "phone_number");
         const auto relationship = opt_string(args, "relationship");
         const auto is_self = opt_bool(args, "is_self");
         Json hits = Json::array();
         for (const auto& c : pre.contacts) {
           if (id && c.id != *id) continue;
           if (name && !contains_ci(c.name, *name)) continue;
           if (phone && normalize_phone(c.phone_number) != normalize_phone(*phone)) continue;
           if (relationship && !(c.relationship && equals_ci(*c.relationship, *relationship))) continue;
           if (is_self && c.is_self != *is_self) continue;
           hits.push_back(c);
         }
         if (hits.empty()) raise(ToolErrorKind::NoMatchError, "no contact matches the search");
         return returning(std::move(hits));
       }});

  tools.push_back({make_schema("modify_contact", "contacts", "Update fields of an existing contact.",
                          {required_arg("person_id", ArgKind::String, "Id of the contact to modify."),
                           optional_arg("name", ArgKind::String, "New name."),
                           optional_arg("phone_number", ArgKind::String, "New phone number."),
                           optional_arg("relationship", ArgKind::String, "New relationship."),
                           optional_arg("is_self", ArgKind::Boolean, "New is_self flag.")},
                          "Nothing.", {"KeyError", "ValueError"}, {"contacts"}, {"contacts"}),
                   [](const Json& args, const WorldState& pre) -> ToolCommit {
                     const auto id = args.at("person_id").get<std::string>();
                     if (!find_record(pre.contacts, id)) unknown_id("contact", id);
                     if (args.size() == 1) {
                       raise(ToolErrorKind::ValueError, "modify_contact needs at least one field to change");
                     }
                     const auto is_self = opt_bool(args, "is_self");
                     if (is_self.value_or(false) && has_self_contact(pre, id)) {
                       raise(ToolErrorKind::ValueError, "another contact already has is_self=true");
                     }
                     return [args, id, is_self](WorldState& state) -> Json {
                       auto it = find_record(state.contacts, id);
                       if (it == state.contacts.end()) unknown_id("contact", id);
                       if (is_self.value_or(false) && has_self_contact(state, id)) {
                         raise(ToolErrorKind::ValueError, "another contact already has is_self=true");
                       }
                       if (auto v = opt_string(args, "name")) it->name = *v;
                       if (auto v = opt_string(args, "phone_number")) it->phone_number = *v;
                       if (auto v = opt_string(args, "relationship")) it->relationship = *v;
                       if (is_self) it->is_self = *is_self;
                       return nullptr;
                     };
                   }});

  tools.push_back({make_schema("remove_contact", "contacts", "Remove a contact from the address book.",
                          {required_arg("person_id", ArgKind::String, "Id of the contact to remove.")}, "Nothing.",
                          {"KeyError"}, {"contacts"}, {"contacts"}),
                   [](const Json& args, const WorldState& pre) -> ToolCommit {
                     const auto id = args.at("person_id").get<std::string>();
                     if (!find_record(pre.contacts, id)) unknown_id("contact", id);
                     return [id](WorldState& state) -> Json {
                       auto it = find_record(state.contacts, id);
                       if (it == state.contacts.end()) unknown_id("contact", id);
                       state.contacts.erase(it);
                       return nullptr;
                     };
                   }});
}

void add_message_tools(ToolList& tools) {
  ToolSchema send = make_schema("send_message", "messages", "Send a message to a phone number.",
                           {required_arg("phone_number", ArgKind::String, "Recipient phone number."),
                            required_arg("content", ArgKind::String, "Message text.")},
                           "The message_id of the sent message.", {"ConnectionError"}, {"cellular", "messages"},
                           {"messages"});
  send.requires_state.push_back({"cellular", true, "ConnectionError", "cellular service is not on", std::nullopt});
  tools.push_back({std::move(send), [](const Json& args, const WorldState&) -> ToolCommit {
                     return [args](WorldState& state) -> Json {
                       MessageRecord m;
                       m.id = state.allocate_id(Database::Messages);
                       m.phone_number = args.at("phone_number").get<std::string>();
                       m.content = args.at("content").get<std::string>();
                       m.created_at = state.clock_timestamp;
                       state.messages.push_back(m);
                       return m.id;
                     };
                   }});

  tools.push_back(
      {make_schema("search_messages", "messages",
              "Search sent and received messages by id, phone number, content and creation time range.",
              {optional_arg("message_id", ArgKind::String, "Exact message id."),
               optional_arg("phone_number", ArgKind::String, "Phone number; formatting is ignored."),
               optional_arg("content", ArgKind::String, "Case-insensitive substring of the content."),
               optional_arg("creation_timestamp_lowerbound", ArgKind::Timestamp, "Earliest creation time, inclusive."),
               optional_arg("creation_timestamp_upperbound", ArgKind::Timestamp, "Latest creation time, inclusive.")},
              "List of matching messages.", {"NoMatchError"}, {"messages"}, {}),
       [](const Json& args, const WorldState& pre) -> ToolCommit {
         const auto id = opt_string(args, "message_id");
         const auto phone = opt_string(args, "phone_number");
         const auto content = opt_string(args, "content");
         const auto lo = opt_timestamp(args, "creation_timestamp_lowerbound");
         const auto hi = opt_timestamp(args, "creation_timestamp_upperbound");
         Json hits = Json::array();
         for (const auto& m : pre.messages) {
           if (id && m.id != *id) continue;
           if (phone && normalize_phone(m.phone_number) != normalize_phone(*phone)) continue;
           if (content && !contains_ci(m.content, *content)) continue;
           if (lo && m.created_at < *lo) continue;
           if (hi && m.created_at > *hi) continue;
           hits.push_back(m);
         }
         if (hits.empty()) raise(ToolErrorKind::NoMatchError, "no message matches the search");
         return returning(std::move(hits));
       }});
}

void add_reminder_tools(ToolList& tools) {
  tools.push_back({make_schema("add_reminder", "reminders", "Add a reminder, optionally tied to a location.",
                          {required_arg("content", ArgKind::String, "What to be reminded of."),
                           required_arg("reminder_timestamp", ArgKind::Timestamp, "When to remind, in unix seconds."),
                           optional_arg("latitude", ArgKind::Latitude, "Latitude of the reminder location."),
                           optional_arg("longitude", ArgKind::Longitude, "Longitude of the reminder location.")},
                          "The reminder_id of the new reminder.", {"ValueError"}, {"reminders"}, {"reminders"}),
                   [](const Json& args, const WorldState&) -> ToolCommit {
                     const auto lat = opt_number(args, "latitude");
                     const auto lon = opt_number(args, "longitude");
                     check_optional_coordinates(lat, lon);
                     return [args, lat, lon](WorldState& state) -> Json {
                       ReminderRecord r;
                       r.id = state.allocate_id(Database::Reminders);
                       r.content = args.at("content").get<std::string>();
                       r.reminder_timestamp = args.at("reminder_timestamp").get<std::int64_t>();
                       r.latitude = lat;
                       r.longitude = lon;
                       state.reminders.push_back(r);
                       return r.id;
                     };
                   }});

  tools.push_back(
      {make_schema("search_reminders", "reminders", "Search reminders by id, content and reminder time range.",
              {optional_arg("reminder_id", ArgKind::String, "Exact reminder id."),
               optional_arg("content", ArgKind::String, "Case-insensitive substring of the content."),
               optional_arg("reminder_timestamp_lowerbound", ArgKind::Timestamp, "Earliest reminder time, inclusive."),
               optional_arg("reminder_timestamp_upperbound", ArgKind::Timestamp, "Latest reminder time, inclusive.")},
              "List of matching reminders.", {"NoMatchError"}, {"reminders"}, {}),
       [](const Json& args, const WorldState& pre) -> ToolCommit {
         const auto id = opt_string(args, "reminder_id");
         const auto content = opt_string(args, "content");
         const auto lo = opt_timestamp(args, "reminder_timestamp_lowerbound");
         const auto hi = opt_timestamp(args, "reminder_timestamp_upperbound");
         Json hits = Json::array();
         for (const auto& r : pre.reminders) {
           if (id && r.id != *id) continue;
           if (content && !contains_ci(r.content, *content)) continue;
           if (lo && r.reminder_timestamp < *lo) continue;
           if (hi && r.reminder_timestamp > *hi) continue;
           hits.push_back(r);
         }
         if (hits.empty()) raise(ToolErrorKind::NoMatchError, "no reminder matches the search");
         return returning(std::move(hits));
       }});

  tools.push_back({make_schema("modify_reminder", "reminders", "Update fields of an existing reminder.",
                          {required_arg("reminder_id", ArgKind::String, "Id of the reminder to modify."),
                           optional_arg("content", ArgKind::String, "New content."),
                           optional_arg("reminder_timestamp", ArgKind::Timestamp, "New reminder time."),
                           optional_arg("latitude", ArgKind::Latitude, "New latitude."),
                           optional_arg("longitude", ArgKind::Longitude, "New longitude.")},
                          "Nothing.", {"KeyError", "ValueError"}, {"reminders"}, {"reminders"}),
                   [](const Json& args, const WorldState& pre) -> ToolCommit {
                     const auto id = args.at("reminder_id").get<std::string>();
                     if (!find_record(pre.reminders, id)) unknown_id("reminder", id);
                     if (args.size() == 1) {
                       raise(ToolErrorKind::ValueError, "modify_reminder needs at least one field to change");
                     }
                     const auto lat = opt_number(args, "latitude");
                     const auto lon = opt_number(args, "longitude");
                     check_optional_coordinates(lat, lon);
                     return [args, id, lat, lon](WorldState& state) -> Json {
                       auto it = find_record(state.reminders, id);
                       if (it == state.reminders.end()) unknown_id("reminder", id);
                       if (auto v = opt_string(args, "content")) it->content = *v;
                       if (auto v = opt_timestamp(args, "reminder_timestamp")) it->reminder_timestamp = *v;
                       if (lat) {
                         it->latitude = lat;
                         it->longitude = lon;
                       }
                       return nullptr;
                     };
                   }});

  tools.push_back({make_schema("remove_reminder", "reminders", "Remove a reminder.",
                          {required_arg("reminder_id", ArgKind::String, "Id of the reminder to remove.")}, "Nothing.",
                          {"KeyError"}, {"reminders"}, {"reminders"}),
                   [](const Json& args, const WorldState& pre) -> ToolCommit {
                     const auto id = args.at("reminder_id").get<std::string>();
                     if (!find_record(pre.reminders, id)) unknown_id("reminder", id);
                     return [id](WorldState& state) -> Json {
                       auto it = find_record(state.reminders, id);
                       if (it == state.reminders.end()) unknown_id("reminder", id);
                       state.reminders.erase(it);
                       return nullptr;
                     };
                   }});
}

}  // namespace

void add_personal_tools(ToolList& tools) {
  add_contact_tools(tools);
  add_message_tools(tools);
  add_reminder_tools(tools);
}

}  // namespace toolsim::detail
