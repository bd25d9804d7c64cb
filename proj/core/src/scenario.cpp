#include "toolsim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace toolsim {

namespace {

struct CategoryName {
  Category category;
  std::string_view label;
};

constexpr CategoryName kCategoryNames[] = {
    {Category::SingleToolCall, "STC"},   {Category::MultipleToolCall, "MTC"}, {Category::SingleUserTurn, "SUT"},
    {Category::MultipleUserTurn, "MUT"}, {Category::StateDependency, "SD"},   {Category::Canonicalization, "C"},
    {Category::InsufficientInformation, "II"},
};

// Runs `f`, rethrowing any parse failure as a ScenarioError at `path`.
template <typename F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScenarioError(path, e.what());
  }
}

Json demonstration_to_json(const Message& m) {
  return Json{{"sender", m.sender}, {"recipient", m.recipient}, {"text", m.text() ? *m.text() : std::string{}}};
}

Message demonstration_from_json(const Json& j) {
  Message m;
  m.sender = j.at("sender").get<Role>();
  m.recipient = j.at("recipient").get<Role>();
  m.content = j.at("text").get<std::string>();
  m.visible_to = RoleSet{Role::User};
  return m;
}

Json user_to_json(const UserSpec& u) {
  Json demos = Json::array();
  for (const auto& d : u.demonstrations) demos.push_back(demonstration_to_json(d));
  return Json{{"goal", u.goal}, {"knowledge_boundary", u.knowledge_boundary}, {"demonstrations", demos}};
}

UserSpec user_from_json(const Json& j) {
  UserSpec u;
  u.goal = j.value("goal", std::string{});
  u.knowledge_boundary = j.value("knowledge_boundary", std::string{});
  const auto demos = j.value("demonstrations", Json::array());
  for (std::size_t i = 0; i < demos.size(); ++i) {
    u.demonstrations.push_back(
        at_path("/user/demonstrations/" + std::to_string(i), [&] { return demonstration_from_json(demos[i]); }));
  }
  return u;
}

std::vector<std::string> string_list(const Json& j, const char* key) {
  return j.value(key, std::vector<std::string>{});
}

bool valid_id(std::string_view id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

}  // namespace

std::string_view to_string(Category c) {
  for (const auto& n : kCategoryNames) {
    if (n.category == c) return n.label;
  }
  return "?";
}

Category parse_category(std::string_view label) {
  for (const auto& n : kCategoryNames) {
    if (n.label == label) return n.category;
  }
  throw std::invalid_argument("unknown category '" + std::string(label) + "' (expected STC, MTC, SUT, MUT, SD, C or II)");
}

void to_json(Json& j, const ScriptStep& s) {
  if (const auto* text = std::get_if<std::string>(&s)) {
    j = Json{{"text", *text}};
    return;
  }
  Json calls = Json::array();
  for (const auto& c : std::get<ToolCallBatch>(s)) calls.push_back(Json{{"name", c.tool_name}, {"arguments", c.arguments}});
  j = Json{{"tool_calls", calls}};
}

void from_json(const Json& j, ScriptStep& s) {
  if (auto it = j.find("text"); it != j.end()) {
    s = it->get<std::string>();
    return;
  }
  ToolCallBatch batch;
  for (const auto& c : j.at("tool_calls")) {
    ToolCallRequest call;
    call.tool_name = c.at("name").get<std::string>();
    call.arguments = c.value("arguments", Json::object());
    call.batch_position = static_cast<int>(batch.size());
    batch.push_back(std::move(call));
  }
  if (batch.empty()) throw std::invalid_argument("a tool_calls step needs at least one call");
  s = std::move(batch);
}

void to_json(Json& j, const Playbook& p) {
  j = Json{{"agent", p.agent}, {"user", p.user}};
  if (p.turn_count) j["turn_count"] = *p.turn_count;
}

void from_json(const Json& j, Playbook& p) {
  p.agent = j.value("agent", std::vector<ScriptStep>{});
  p.user = j.value("user", std::vector<ScriptStep>{});
  p.turn_count.reset();
  if (auto it = j.find("turn_count"); it != j.end() && !it->is_null()) p.turn_count = it->get<int>();
}

Json scenario_to_json(const Scenario& s) {
  Json categories = Json::array();
  for (Category c : s.categories) categories.push_back(std::string(to_string(c)));
  Json playbooks = Json::object();
  for (const auto& [name, p] : s.playbooks) playbooks[name] = p;
  return Json{{"schema_version", kScenarioSchemaVersion},
              {"id", s.id},
              {"description", s.description},
              {"categories", categories},
              {"initial_state", world_to_json(s.initial_state)},
              {"user", user_to_json(s.user)},
              {"opening_message", s.opening_message},
              {"necessary_tools", s.necessary_tools},
              {"withheld_tools", s.withheld_tools},
              {"augmentation", s.augmentation},
              {"milestones", s.milestones},
              {"minefields", s.minefields},
              {"max_turns", s.max_turns},
              {"playbooks", playbooks}};
}

Scenario scenario_from_json(const Json& j, const Catalog& catalog) {
  if (!j.is_object()) throw ScenarioError("", "a scenario must be a JSON object");
  const int version = at_path("/schema_version", [&] { return j.at("schema_version").get<int>(); });
  if (version != kScenarioSchemaVersion) {
    throw ScenarioError("/schema_version", "unsupported schema_version " + std::to_string(version));
  }
  static const std::set<std::string> known{"schema_version", "id",          "description",     "categories",
                                           "initial_state",  "user",        "opening_message", "necessary_tools",
                                           "withheld_tools", "augmentation", "milestones",     "minefields",
                                           "max_turns",      "playbooks"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ScenarioError("/" + key, "unknown field");
  }

  Scenario s;
  s.id = at_path("/id", [&] { return j.at("id").get<std::string>(); });
  s.description = at_path("/description", [&] { return j.value("description", std::string{}); });
  at_path("/categories", [&] {
    for (const auto& c : j.at("categories")) s.categories.insert(parse_category(c.get<std::string>()));
  });
  s.initial_state = at_path("/initial_state", [&] { return world_from_json(j.value("initial_state", Json::object())); });
  s.user = at_path("/user", [&] { return user_from_json(j.value("user", Json::object())); });
  s.opening_message = at_path("/opening_message", [&] { return j.at("opening_message").get<std::string>(); });
  s.necessary_tools = at_path("/necessary_tools", [&] { return string_list(j, "necessary_tools"); });
  s.withheld_tools = at_path("/withheld_tools", [&] { return string_list(j, "withheld_tools"); });
  s.augmentation = at_path("/augmentation", [&] { return j.value("augmentation", Json::object()).get<AugmentationConfig>(); });
  s.milestones = at_path("/milestones", [&] { return j.value("milestones", Json::object()).get<MilestoneDag>(); });
  s.minefields = at_path("/minefields", [&] { return j.value("minefields", Json::object()).get<MilestoneDag>(); });
  s.max_turns = at_path("/max_turns", [&] { return j.value("max_turns", kDefaultMaxTurns); });
  if (auto it = j.find("playbooks"); it != j.end()) {
    for (const auto& [name, p] : it->items()) {
      s.playbooks[name] = at_path("/playbooks/" + name, [&] { return p.get<Playbook>(); });
    }
  }
  validate_scenario(s, catalog);
  return s;
}

void validate_scenario(const Scenario& s, const Catalog& catalog) {
  if (!valid_id(s.id)) throw ScenarioError("/id", "id must be non-empty and use only letters, digits, '_' and '-'");
  if (s.categories.empty()) throw ScenarioError("/categories", "at least one category is required");
  if (s.opening_message.empty()) throw ScenarioError("/opening_message", "must not be empty");
  if (s.max_turns < 2) throw ScenarioError("/max_turns", "must be at least 2");

  std::set<std::string> necessary;
  for (std::size_t i = 0; i < s.necessary_tools.size(); ++i) {
    const auto& name = s.necessary_tools[i];
    const auto* def = catalog.find(name);
    const std::string path = "/necessary_tools/" + std::to_string(i);
    if (def == nullptr) throw ScenarioError(path, "unknown tool '" + name + "'");
    if (def->user_only) throw ScenarioError(path, "'" + name + "' is not an agent tool");
    if (!necessary.insert(name).second) throw ScenarioError(path, "duplicate tool '" + name + "'");
  }
  for (std::size_t i = 0; i < s.withheld_tools.size(); ++i) {
    const auto& name = s.withheld_tools[i];
    const std::string path = "/withheld_tools/" + std::to_string(i);
    if (catalog.find(name) == nullptr) throw ScenarioError(path, "unknown tool '" + name + "'");
    if (necessary.count(name)) throw ScenarioError(path, "'" + name + "' is both necessary and withheld");
  }
  at_path("/augmentation", [&] { s.augmentation.validate(); });
  at_path("/milestones", [&] { s.milestones.validate(); });
  at_path("/minefields", [&] { s.minefields.validate(); });

  const auto presented = at_path("/augmentation", [&] { return presented_tools(s, catalog); });
  for (std::size_t i = 0; i < s.milestones.nodes.size(); ++i) {
    const auto tool = trace_tool(s.milestones.nodes[i]);
    if (tool && !presented.presents(*tool)) {
      throw ScenarioError("/milestones/nodes/" + std::to_string(i),
                          "milestone expects a call to '" + *tool + "', which the agent is not offered");
    }
  }
  // Demonstrations sit on the bus before the opening message, so they must
  // follow the next-speaker rule and hand the turn back to the user.
  std::optional<Role> next;
  if (!s.user.goal.empty() || !s.user.knowledge_boundary.empty()) next = Role::User;
  for (std::size_t i = 0; i < s.user.demonstrations.size(); ++i) {
    const auto& d = s.user.demonstrations[i];
    const std::string path = "/user/demonstrations/" + std::to_string(i);
    if (d.sender == d.recipient) throw ScenarioError(path, "sender and recipient must differ");
    if (next && d.sender != *next) {
      throw ScenarioError(path, "expected a message from " + std::string(to_string(*next)));
    }
    next = d.recipient;
  }
  if (next && *next != Role::User) {
    throw ScenarioError("/user/demonstrations", "the last demonstration must be addressed to the user");
  }
}

PresentedToolset presented_tools(const Scenario& s, const Catalog& catalog) {
  std::vector<ToolSchema> necessary;
  for (const auto& name : s.necessary_tools) {
    const auto* def = catalog.find(name);
    if (def == nullptr) throw std::invalid_argument("unknown tool '" + name + "'");
    necessary.push_back(def->schema);
  }
  std::vector<ToolSchema> pool;
  for (auto& schema : catalog.agent_schemas()) {
    const bool excluded = std::count(s.necessary_tools.begin(), s.necessary_tools.end(), schema.name) > 0 ||
                          std::count(s.withheld_tools.begin(), s.withheld_tools.end(), schema.name) > 0;
    if (!excluded) pool.push_back(std::move(schema));
  }
  return apply_augmentations(necessary, pool, s.augmentation);
}

std::vector<std::string> augmentation_labels(const AugmentationConfig& config) {
  std::vector<std::string> labels;
  if (config.scramble_tool_name) labels.emplace_back("TNS");
  if (config.scramble_tool_description) labels.emplace_back("TDS");
  if (config.scramble_arg_descriptions) labels.emplace_back("ADS");
  if (config.scramble_arg_types) labels.emplace_back("ATS");
  if (!labels.empty()) return labels;
  switch (config.distraction) {
    case Distraction::Zero:
      return {"0 DT"};
    case Distraction::Three:
      return {"3 DT"};
    case Distraction::Ten:
      return {"10 DT"};
    case Distraction::All:
      return {"All DT"};
  }
  return {"0 DT"};
}

Scenario load_scenario(const std::filesystem::path& file, const Catalog& catalog) {
  std::ifstream in(file);
  if (!in) throw ScenarioError(file.string(), "cannot open file");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ScenarioError(file.string(), e.what());
  }
  try {
    return scenario_from_json(j, catalog);
  } catch (const ScenarioError& e) {
    throw ScenarioError(file.filename().string() + "#" + e.path(), e.message());
  }
}

void save_scenario(const Scenario& s, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << scenario_to_json(s).dump(2) << '\n';
}

std::vector<Scenario> load_scenarios(const std::filesystem::path& dir, const Catalog& catalog) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Scenario> out;
  std::set<std::string> ids;
  for (const auto& f : files) {
    out.push_back(load_scenario(f, catalog));
    if (!ids.insert(out.back().id).second) throw ScenarioError(f.string(), "duplicate scenario id '" + out.back().id + "'");
  }
  std::sort(out.begin(), out.end(), [](const Scenario& a, const Scenario& b) { return a.id < b.id; });
  return out;
}

}  // namespace toolsim
