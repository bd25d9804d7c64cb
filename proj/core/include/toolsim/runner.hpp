#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "toolsim/adapter.hpp"
#include "toolsim/evaluation.hpp"
#include "toolsim/llm.hpp"
#include "toolsim/scenario.hpp"
#include "toolsim/trajectory.hpp"

namespace toolsim {

/// How to build a role's adapter for each scenario.
///   "scripted"            the scenario's "golden" playbook
///   "scripted:<name>"     another playbook of the scenario
///   "llm:<config.json>"   an OpenAI-compatible endpoint (see LlmConfig)
struct AdapterSpec {
  enum class Kind { Scripted, Llm };
  Kind kind = Kind::Scripted;
  std::string playbook = "golden";
  std::string config_path;

  std::string describe() const;
};

/// Throws std::invalid_argument on an unrecognized spec.
AdapterSpec parse_adapter_spec(std::string_view text);

/// Throws std::invalid_argument when a scripted playbook does not exist.
std::unique_ptr<RoleAdapter> make_adapter(const AdapterSpec& spec, Role role, const Scenario& scenario);

/// Per-run seed: a fixed mix of the base seed, the scenario id and the repeat.
std::uint64_t derive_seed(std::uint64_t base, std::string_view scenario_id, int repeat);

struct RunRecord {
  std::string scenario_id;
  int repeat = 0;
  std::uint64_t seed = 0;
  std::string agent;
  std::string user;
  std::vector<std::string> categories;
  std::vector<std::string> augmentations;
  std::string trajectory;  // path relative to the results directory
  Termination termination = Termination::Running;
  int turn_count = 0;
  MatchResult evaluation;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

void to_json(Json& j, const RunRecord& r);
void from_json(const Json& j, RunRecord& r);

/// Scores a trajectory against its scenario and fills every record field
/// except `trajectory` and `repeat`.
RunRecord score_trajectory(const Scenario& scenario, const Trajectory& trajectory);

struct RunOptions {
  AdapterSpec agent;
  AdapterSpec user;
  int repeats = 1;
  std::uint64_t seed = 0;
  int parallel = 1;
};

struct RunOutput {
  std::vector<RunRecord> records;  // ordered by scenario id, then repeat
  std::vector<Trajectory> trajectories;  // parallel to records
  std::vector<double> wall_seconds;  // parallel to records
};

/// Runs every scenario `repeats` times, up to `parallel` sessions at once.
RunOutput run_scenarios(const std::vector<Scenario>& scenarios, const RunOptions& options);

/// Results store layout under `dir`:
///   records.jsonl          one RunRecord per line, in canonical order
///   index.json             run parameters and record count
///   trajectories/*.jsonl   one trajectory per record
/// Everything in it is a pure function of the scenarios and options, so a
/// rerun reproduces it byte for byte.
void write_results(const std::filesystem::path& dir, const RunOutput& output, const RunOptions& options);

/// Wall-clock seconds per record, one JSON line each. Timings vary between
/// runs, so they go to a separate file outside the results store.
void write_timings(const std::filesystem::path& file, const RunOutput& output);

/// Accepts the results directory or its records.jsonl directly.
std::vector<RunRecord> read_records(const std::filesystem::path& dir);

struct GoldenIssue {
  std::string scenario_id;
  std::string message;
};

/// The tool set a scenario presents to the agent (after augmentation) as
/// indented JSON: rendered schemas plus the original-to-presented name map.
std::string presented_tools_text(const Scenario& scenario);

/// Replays each scenario's golden playbook and checks that it ends the
/// conversation, scores exactly 1, matches its recorded turn count, and
/// reproduces `golden_dir/<id>.trajectory` and `golden_dir/<id>.tools.json`
/// byte for byte. With `update` set, those files are rewritten instead.
std::vector<GoldenIssue> check_golden(const std::vector<Scenario>& scenarios, const std::filesystem::path& golden_dir,
                                      bool update = false);

}  // namespace toolsim
