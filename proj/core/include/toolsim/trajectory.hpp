#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "toolsim/world_state.hpp"

namespace toolsim {

inline constexpr int kTrajectorySchemaVersion = 1;

enum class Termination { Running, EndConversation, Cutoff, Aborted, Forced };

std::string_view to_string(Termination t);
Termination parse_termination(std::string_view text);

/// A finished (or interrupted) session: one snapshot per bus message.
struct Trajectory {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::string agent;  // adapter identities
  std::string user;
  int max_turns = 0;
  std::vector<Snapshot> snapshots;
  Termination termination = Termination::Running;
  std::string detail;  // why a session was aborted or forced to end

  std::vector<Message> messages() const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Line-delimited records: a header, one "turn" record per snapshot, and an
/// "end" record with the termination reason and turn count.
void write_trajectory(std::ostream& out, const Trajectory& t);
Trajectory read_trajectory(std::istream& in);

void save_trajectory(const Trajectory& t, const std::filesystem::path& file);
Trajectory load_trajectory(const std::filesystem::path& file);

}  // namespace toolsim
