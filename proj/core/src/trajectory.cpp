#include "toolsim/trajectory.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "toolsim/bus.hpp"

namespace toolsim {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Running:
      return "running";
    case Termination::EndConversation:
      return "end_conversation";
    case Termination::Cutoff:
      return "cutoff";
    case Termination::Aborted:
      return "aborted";
    case Termination::Forced:
      return "forced";
  }
  return "running";
}

Termination parse_termination(std::string_view text) {
  for (auto t : {Termination::Running, Termination::EndConversation, Termination::Cutoff, Termination::Aborted,
                 Termination::Forced}) {
    if (to_string(t) == text) return t;
  }
  throw std::invalid_argument("unknown termination '" + std::string(text) + "'");
}

std::vector<Message> Trajectory::messages() const {
  std::vector<Message> out;
  out.reserve(snapshots.size());
  for (const auto& s : snapshots) out.push_back(s.message);
  return out;
}

void write_trajectory(std::ostream& out, const Trajectory& t) {
  out << Json{{"record", "header"},
              {"schema_version", kTrajectorySchemaVersion},
              {"scenario_id", t.scenario_id},
              {"seed", t.seed},
              {"agent", t.agent},
              {"user", t.user},
              {"max_turns", t.max_turns}}
             .dump()
      << '\n';
  for (const auto& s : t.snapshots) {
    Json record = s;
    record["record"] = "turn";
    out << record.dump() << '\n';
  }
  const auto messages = t.messages();
  out << Json{{"record", "end"},
              {"termination", to_string(t.termination)},
              {"detail", t.detail},
              {"turn_count", turn_count(messages)}}
             .dump()
      << '\n';
}

Trajectory read_trajectory(std::istream& in) {
  Trajectory t;
  std::string line;
  int line_no = 0;
  bool have_header = false, have_end = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      const auto kind = j.at("record").get<std::string>();
      if (kind == "header") {
        if (j.at("schema_version").get<int>() != kTrajectorySchemaVersion) {
          throw std::runtime_error("unsupported schema_version");
        }
        t.scenario_id = j.at("scenario_id").get<std::string>();
        t.seed = j.at("seed").get<std::uint64_t>();
        t.agent = j.value("agent", std::string{});
        t.user = j.value("user", std::string{});
        t.max_turns = j.value("max_turns", 0);
        have_header = true;
      } else if (kind == "turn") {
        t.snapshots.push_back(j.get<Snapshot>());
      } else if (kind == "end") {
        t.termination = parse_termination(j.at("termination").get<std::string>());
        t.detail = j.value("detail", std::string{});
        have_end = true;
      } else {
        throw std::runtime_error("unknown record '" + kind + "'");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("trajectory line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header || !have_end) throw std::runtime_error("trajectory is missing its header or end record");
  return t;
}

void save_trajectory(const Trajectory& t, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  write_trajectory(out, t);
}

Trajectory load_trajectory(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  return read_trajectory(in);
}

}  // namespace toolsim
