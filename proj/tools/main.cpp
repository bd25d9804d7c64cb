#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "toolsim/catalog.hpp"
#include "toolsim/playground.hpp"
#include "toolsim/report.hpp"
#include "toolsim/runner.hpp"
#include "toolsim/scenario.hpp"

namespace fs = std::filesystem;
using namespace toolsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string default_scenario_dir() {
  if (const char* env = std::getenv("TOOLSIM_SCENARIOS")) return env;
  return "scenarios";
}

std::vector<Scenario> load_selected(const std::string& dir, const std::vector<std::string>& only) {
  auto all = load_scenarios(dir);
  if (only.empty()) return all;
  std::vector<Scenario> out;
  for (const auto& id : only) {
    auto it = std::find_if(all.begin(), all.end(), [&](const Scenario& s) { return s.id == id; });
    if (it == all.end()) throw std::invalid_argument("no scenario '" + id + "' in " + dir);
    out.push_back(*it);
  }
  return out;
}

int cmd_run(const std::string& scenarios_dir, const std::vector<std::string>& only, const std::string& agent,
            const std::string& user, int repeats, std::uint64_t seed, int parallel, const std::string& out_dir,
            const std::string& timings) {
  RunOptions options;
  options.agent = parse_adapter_spec(agent);
  options.user = parse_adapter_spec(user);
  options.repeats = repeats;
  options.seed = seed;
  options.parallel = parallel;
  const auto scenarios = load_selected(scenarios_dir, only);
  const auto output = run_scenarios(scenarios, options);
  write_results(out_dir, output, options);
  if (!timings.empty()) write_timings(timings, output);

  int aborted = 0;
  for (const auto& r : output.records) aborted += r.termination == Termination::Aborted ? 1 : 0;
  std::cout << "wrote " << output.records.size() << " records to " << out_dir << "\n";
  if (aborted > 0) std::cerr << aborted << " session(s) aborted; see records.jsonl\n";
  return kExitOk;
}

int cmd_report(const std::string& results, const std::string& format) {
  const auto records = read_records(results);
  const auto report = aggregate(records);
  if (format == "json") {
    std::cout << report_to_json(report).dump(2) << "\n";
  } else {
    std::cout << report_to_table(report);
  }
  return kExitOk;
}

int cmd_validate(const std::string& scenarios_dir, const std::vector<std::string>& only, std::string golden_dir,
                 bool update) {
  std::vector<Scenario> scenarios;
  try {
    scenarios = load_selected(scenarios_dir, only);
  } catch (const std::exception& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return kExitFailure;
  }
  if (golden_dir.empty()) golden_dir = (fs::path(scenarios_dir).parent_path() / "golden").string();
  const auto issues = check_golden(scenarios, golden_dir, update);
  for (const auto& issue : issues) std::cerr << issue.scenario_id << ": " << issue.message << "\n";
  std::cout << scenarios.size() << " scenario(s) checked, " << issues.size() << " problem(s)\n";
  return issues.empty() ? kExitOk : kExitFailure;
}

int cmd_list(const std::string& scenarios_dir, bool tools) {
  if (tools) {
    for (const auto& s : Catalog::standard().schemas()) {
      std::cout << s.name << "\t" << s.domain << "\t" << s.description << "\n";
    }
    return kExitOk;
  }
  for (const auto& s : load_scenarios(scenarios_dir)) {
    std::cout << s.id << "\t";
    bool first = true;
    for (Category c : s.categories) {
      std::cout << (first ? "" : ",") << to_string(c);
      first = false;
    }
    std::cout << "\t" << s.description << "\n";
  }
  return kExitOk;
}

int cmd_serve(const std::string& scenarios_dir, const ServeOptions& options) {
  Playground playground(load_scenarios(scenarios_dir));
  std::cout << "playground listening on http://" << options.host << ":" << options.port << "\n" << std::flush;
  if (!serve_playground(playground, options)) {
    std::cerr << "cannot listen on " << options.host << ":" << options.port << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stateful tool-use evaluation: run scenarios, score them, and serve a playground."};
  app.require_subcommand(1);

  std::string scenarios_dir = default_scenario_dir();
  std::vector<std::string> only;

  auto* run = app.add_subcommand("run", "Run scenarios and write a results store");
  std::string agent = "scripted";
  std::string user = "scripted";
  int repeats = 1;
  std::uint64_t seed = 0;
  int parallel = 1;
  std::string out_dir;
  std::string timings;
  run->add_option("--scenarios", scenarios_dir, "Scenario directory")->capture_default_str();
  run->add_option("--scenario", only, "Only these scenario ids (repeatable)");
  run->add_option("--agent", agent, "scripted | scripted:<playbook> | llm:<config.json>")->capture_default_str();
  run->add_option("--user", user, "scripted | scripted:<playbook> | llm:<config.json>")->capture_default_str();
  run->add_option("--repeats", repeats, "Runs per scenario")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--seed", seed, "Base seed")->capture_default_str();
  run->add_option("--parallel", parallel, "Concurrent sessions")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--out", out_dir, "Results directory")->required();
  run->add_option("--timings", timings, "Also write per-record wall times to this file");

  auto* report = app.add_subcommand("report", "Aggregate a results store");
  std::string results;
  std::string format = "table";
  report->add_option("results", results, "Results directory or records.jsonl")->required();
  report->add_option("--format", format, "table or json")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Check scenario files and replay golden playbooks");
  std::string golden_dir;
  bool update_golden = false;
  validate->add_option("--scenarios", scenarios_dir, "Scenario directory")->capture_default_str();
  validate->add_option("--scenario", only, "Only these scenario ids (repeatable)");
  validate->add_option("--golden", golden_dir, "Golden trajectory directory (default: <scenarios>/../golden)");
  validate->add_flag("--update-golden", update_golden, "Rewrite golden trajectories instead of comparing");

  auto* list = app.add_subcommand("list", "List scenarios or tools");
  bool list_tools = false;
  list->add_option("--scenarios", scenarios_dir, "Scenario directory")->capture_default_str();
  list->add_flag("--tools", list_tools, "List the tool catalog instead");

  auto* serve = app.add_subcommand("serve", "Serve the playground HTTP/SSE API");
  ServeOptions serve_options;
  serve->add_option("--scenarios", scenarios_dir, "Scenario directory")->capture_default_str();
  serve->add_option("--host", serve_options.host, "Bind address")->capture_default_str();
  serve->add_option("--port", serve_options.port, "Port")->check(CLI::Range(1, 65535))->capture_default_str();
  serve->add_option("--cors-origin", serve_options.cors_origin, "Allowed UI origin")->capture_default_str();
  serve->add_option("--static", serve_options.static_dir, "Directory of built UI assets to serve at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(scenarios_dir, only, agent, user, repeats, seed, parallel, out_dir, timings);
    if (*report) return cmd_report(results, format);
    if (*validate) return cmd_validate(scenarios_dir, only, golden_dir, update_golden);
    if (*list) return cmd_list(scenarios_dir, list_tools);
    if (*serve) return cmd_serve(scenarios_dir, serve_options);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
