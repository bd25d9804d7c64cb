#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "toolsim/augmentation.hpp"
#include "toolsim/catalog.hpp"
#include "toolsim/milestone.hpp"
#include "toolsim/world_state.hpp"

namespace toolsim {

inline constexpr int kScenarioSchemaVersion = 1;
inline constexpr int kDefaultMaxTurns = 30;

enum class Category { SingleToolCall, MultipleToolCall, SingleUserTurn, MultipleUserTurn, StateDependency, Canonicalization, InsufficientInformation };

inline constexpr Category kAllCategories[] = {Category::SingleToolCall,   Category::MultipleToolCall,
                                              Category::SingleUserTurn,   Category::MultipleUserTurn,
                                              Category::StateDependency,  Category::Canonicalization,
                                              Category::InsufficientInformation};

/// Short column label: STC, MTC, SUT, MUT, SD, C, II.
std::string_view to_string(Category c);
Category parse_category(std::string_view label);

struct UserSpec {
  std::string goal;
  std::string knowledge_boundary;
  /// Example exchange shown only to the user simulator (text messages).
  std::vector<Message> demonstrations;

  friend bool operator==(const UserSpec&, const UserSpec&) = default;
};

/// One scripted reply: text, or a batch of tool calls by original tool name.
using ScriptStep = std::variant<std::string, ToolCallBatch>;

struct Playbook {
  std::vector<ScriptStep> agent;
  std::vector<ScriptStep> user;
  /// Hand-counted turn count of the resulting trajectory, when recorded.
  std::optional<int> turn_count;

  friend bool operator==(const Playbook&, const Playbook&) = default;
};

struct Scenario {
  std::string id;
  std::string description;
  std::set<Category> categories;
  WorldState initial_state;
  UserSpec user;
  std::string opening_message;
  std::vector<std::string> necessary_tools;
  /// Tools deliberately kept from the agent (insufficient-information scenarios).
  std::vector<std::string> withheld_tools;
  AugmentationConfig augmentation;
  MilestoneDag milestones;
  MilestoneDag minefields;
  int max_turns = kDefaultMaxTurns;
  /// Scripted role playbooks by name; "golden" must reach a final score of 1.
  std::map<std::string, Playbook> playbooks;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)), message_(message) {}
  /// JSON pointer (or file name) of the offending element.
  const std::string& path() const { return path_; }
  const std::string& message() const { return message_; }

 private:
  std::string path_;
  std::string message_;
};

void to_json(Json& j, const ScriptStep& s);
void from_json(const Json& j, ScriptStep& s);
void to_json(Json& j, const Playbook& p);
void from_json(const Json& j, Playbook& p);

Json scenario_to_json(const Scenario& s);
/// Parses and validates. Throws ScenarioError with the JSON path of the problem.
Scenario scenario_from_json(const Json& j, const Catalog& catalog = Catalog::standard());

Scenario load_scenario(const std::filesystem::path& file, const Catalog& catalog = Catalog::standard());
void save_scenario(const Scenario& s, const std::filesystem::path& file);
/// Every `*.json` scenario under `dir`, sorted by id. Throws on the first invalid file.
std::vector<Scenario> load_scenarios(const std::filesystem::path& dir, const Catalog& catalog = Catalog::standard());

/// Checks the invariants a loaded scenario must satisfy. Throws ScenarioError.
void validate_scenario(const Scenario& s, const Catalog& catalog = Catalog::standard());

/// The tool set shown to the agent: necessary tools plus distractions drawn
/// from every other agent tool that is not withheld, augmented per the scenario.
PresentedToolset presented_tools(const Scenario& s, const Catalog& catalog = Catalog::standard());

/// Augmentation report columns a scenario contributes to: one per set
/// scrambling flag ("TNS", "TDS", "ADS", "ATS"), or its distraction column
/// ("0 DT", "3 DT", "10 DT", "All DT") when nothing is scrambled.
std::vector<std::string> augmentation_labels(const AugmentationConfig& config);

inline constexpr std::string_view kAugmentationColumns[] = {"0 DT", "3 DT", "10 DT", "All DT", "TNS", "TDS", "ADS", "ATS"};

}  // namespace toolsim
