#include "toolsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "toolsim/bus.hpp"
#include "toolsim/session.hpp"

namespace toolsim {

namespace {

constexpr int kResultsSchemaVersion = 1;

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string trajectory_file(const std::string& scenario_id, int repeat) {
  return "trajectories/" + scenario_id + "__r" + std::to_string(repeat) + ".jsonl";
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + file.string());
}

}  // namespace

std::string AdapterSpec::describe() const {
  if (kind == Kind::Llm) return "llm:" + config_path;
  return playbook == "golden" ? std::string("scripted") : "scripted:" + playbook;
}

AdapterSpec parse_adapter_spec(std::string_view text) {
  AdapterSpec spec;
  if (text == "scripted") return spec;
  if (text.rfind("scripted:", 0) == 0 && text.size() > 9) {
    spec.playbook = std::string(text.substr(9));
    return spec;
  }
  if (text.rfind("llm:", 0) == 0 && text.size() > 4) {
    spec.kind = AdapterSpec::Kind::Llm;
    spec.config_path = std::string(text.substr(4));
    return spec;
  }
  throw std::invalid_argument("adapter must be 'scripted', 'scripted:<playbook>' or 'llm:<config.json>', got '" +
                              std::string(text) + "'");
}

std::unique_ptr<RoleAdapter> make_adapter(const AdapterSpec& spec, Role role, const Scenario& scenario) {
  if (spec.kind == AdapterSpec::Kind::Llm) {
    auto config = load_llm_config(spec.config_path);
    auto transport = make_http_transport(config);
    return std::make_unique<LlmAdapter>(role, std::move(config), std::move(transport));
  }
  auto it = scenario.playbooks.find(spec.playbook);
  if (it == scenario.playbooks.end()) {
    throw std::invalid_argument("scenario '" + scenario.id + "' has no playbook '" + spec.playbook + "'");
  }
  const auto& steps = role == Role::Agent ? it->second.agent : it->second.user;
  return std::make_unique<ScriptedAdapter>(steps, spec.playbook);
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view scenario_id, int repeat) {
  return mix64(mix64(base ^ fnv1a(scenario_id)) + static_cast<std::uint64_t>(repeat));
}

void to_json(Json& j, const RunRecord& r) {
  j = Json{{"scenario_id", r.scenario_id},
           {"repeat", r.repeat},
           {"seed", r.seed},
           {"agent", r.agent},
           {"user", r.user},
           {"categories", r.categories},
           {"augmentations", r.augmentations},
           {"trajectory", r.trajectory},
           {"termination", std::string(to_string(r.termination))},
           {"turn_count", r.turn_count},
           {"evaluation", r.evaluation}};
}

void from_json(const Json& j, RunRecord& r) {
  r.scenario_id = j.at("scenario_id").get<std::string>();
  r.repeat = j.at("repeat").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.agent = j.at("agent").get<std::string>();
  r.user = j.at("user").get<std::string>();
  r.categories = j.at("categories").get<std::vector<std::string>>();
  r.augmentations = j.at("augmentations").get<std::vector<std::string>>();
  r.trajectory = j.at("trajectory").get<std::string>();
  r.termination = parse_termination(j.at("termination").get<std::string>());
  r.turn_count = j.at("turn_count").get<int>();
  r.evaluation = j.at("evaluation").get<MatchResult>();
}

RunRecord score_trajectory(const Scenario& scenario, const Trajectory& trajectory) {
  RunRecord r;
  r.scenario_id = scenario.id;
  r.seed = trajectory.seed;
  r.agent = trajectory.agent;
  r.user = trajectory.user;
  for (Category c : scenario.categories) r.categories.emplace_back(to_string(c));
  r.augmentations = augmentation_labels(scenario.augmentation);
  r.termination = trajectory.termination;
  const auto messages = trajectory.messages();
  r.turn_count = turn_count(messages);
  r.evaluation = evaluate(scenario.milestones, scenario.minefields, trajectory.snapshots);
  return r;
}

RunOutput run_scenarios(const std::vector<Scenario>& scenarios, const RunOptions& options) {
  if (options.repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  if (options.parallel < 1) throw std::invalid_argument("parallel must be at least 1");

  struct Job {
    const Scenario* scenario;
    int repeat;
  };
  std::vector<const Scenario*> ordered;
  for (const auto& s : scenarios) ordered.push_back(&s);
  std::stable_sort(ordered.begin(), ordered.end(), [](const Scenario* a, const Scenario* b) { return a->id < b->id; });
  std::vector<Job> jobs;
  for (const auto* s : ordered) {
    for (int r = 0; r < options.repeats; ++r) jobs.push_back({s, r});
  }

  RunOutput out;
  out.records.resize(jobs.size());
  out.trajectories.resize(jobs.size());
  out.wall_seconds.resize(jobs.size());

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const auto& [scenario, repeat] = jobs[i];
        const auto started = std::chrono::steady_clock::now();
        auto agent = make_adapter(options.agent, Role::Agent, *scenario);
        auto user = make_adapter(options.user, Role::User, *scenario);
        SessionConfig config;
        config.seed = derive_seed(options.seed, scenario->id, repeat);
        Trajectory t = run_session(*scenario, *agent, *user, config);
        RunRecord record = score_trajectory(*scenario, t);
        record.repeat = repeat;
        record.trajectory = trajectory_file(scenario->id, repeat);
        out.records[i] = std::move(record);
        out.trajectories[i] = std::move(t);
        out.wall_seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next = jobs.size();
      }
    }
  };

  const auto thread_count = std::min<std::size_t>(static_cast<std::size_t>(options.parallel), jobs.size());
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < thread_count; ++t) threads.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

void write_results(const std::filesystem::path& dir, const RunOutput& output, const RunOptions& options) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "trajectories");

  std::string records;
  Json ids = Json::array();
  for (std::size_t i = 0; i < output.records.size(); ++i) {
    const auto& record = output.records[i];
    records += Json(record).dump() + "\n";
    save_trajectory(output.trajectories[i], dir / record.trajectory);
    if (ids.empty() || ids.back() != record.scenario_id) ids.push_back(record.scenario_id);
  }
  write_text(dir / "records.jsonl", records);

  const Json index{{"schema_version", kResultsSchemaVersion},
                   {"agent", options.agent.describe()},
                   {"user", options.user.describe()},
                   {"repeats", options.repeats},
                   {"seed", options.seed},
                   {"record_count", output.records.size()},
                   {"scenarios", ids}};
  write_text(dir / "index.json", index.dump(2) + "\n");
}

void write_timings(const std::filesystem::path& file, const RunOutput& output) {
  std::string text;
  for (std::size_t i = 0; i < output.records.size(); ++i) {
    const auto& record = output.records[i];
    text += Json{{"scenario_id", record.scenario_id}, {"repeat", record.repeat}, {"wall_seconds", output.wall_seconds[i]}}
                .dump() +
            "\n";
  }
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  write_text(file, text);
}

std::vector<RunRecord> read_records(const std::filesystem::path& dir) {
  const auto file = std::filesystem::is_directory(dir) ? dir / "records.jsonl" : dir;
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::vector<RunRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(Json::parse(line).get<RunRecord>());
    } catch (const Json::exception& e) {
      throw std::runtime_error(file.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string presented_tools_text(const Scenario& scenario) {
  const auto toolset = presented_tools(scenario);
  Json j{{"scenario_id", scenario.id},
         {"types_hidden", toolset.types_hidden},
         {"name_map", toolset.name_map},
         {"tools", toolset.rendered()}};
  return j.dump(2) + "\n";
}

std::vector<GoldenIssue> check_golden(const std::vector<Scenario>& scenarios, const std::filesystem::path& golden_dir,
                                      bool update) {
  std::vector<GoldenIssue> issues;
  for (const auto& scenario : scenarios) {
    auto report = [&](std::string message) { issues.push_back({scenario.id, std::move(message)}); };
    auto compare_or_update = [&](const std::string& name, const std::string& actual) {
      const auto file = golden_dir / name;
      if (update) {
        std::filesystem::create_directories(golden_dir);
        write_text(file, actual);
        return;
      }
      std::ifstream in(file, std::ios::binary);
      if (!in) {
        report("missing golden file " + file.string());
        return;
      }
      std::ostringstream expected;
      expected << in.rdbuf();
      if (expected.str() != actual) report(name + " differs from " + file.string());
    };
    auto it = scenario.playbooks.find("golden");
    if (it == scenario.playbooks.end()) {
      report("no golden playbook");
      continue;
    }
    ScriptedAdapter agent(it->second.agent, "golden");
    ScriptedAdapter user(it->second.user, "golden");
    Trajectory t;
    try {
      t = run_session(scenario, agent, user);
    } catch (const std::exception& e) {
      report(std::string("golden run failed: ") + e.what());
      continue;
    }
    const RunRecord record = score_trajectory(scenario, t);
    if (t.termination != Termination::EndConversation) {
      report("golden run ended with " + std::string(to_string(t.termination)) +
             (t.detail.empty() ? std::string() : " (" + t.detail + ")"));
    }
    if (record.evaluation.final_score != 1.0) {
      report("golden run scored " + std::to_string(record.evaluation.final_score) + ", expected 1");
    }
    if (it->second.turn_count && *it->second.turn_count != record.turn_count) {
      report("golden run took " + std::to_string(record.turn_count) + " turns, playbook records " +
             std::to_string(*it->second.turn_count));
    }
    if (agent.remaining() != 0 || user.remaining() != 0) report("golden playbook has unused steps");

    std::ostringstream actual;
    write_trajectory(actual, t);
    compare_or_update(scenario.id + ".trajectory", actual.str());
    compare_or_update(scenario.id + ".tools.json", presented_tools_text(scenario));
  }
  return issues;
}

}  // namespace toolsim
