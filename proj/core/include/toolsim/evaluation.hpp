#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "toolsim/milestone.hpp"
#include "toolsim/topo_matcher.hpp"

namespace toolsim {

struct MilestoneScore {
  std::string id;
  int turn = 0;  // assigned turn, 0 if none
  double similarity = 0.0;
  bool unresolved = false;  // a binding source had no usable trace at its turn

  friend bool operator==(const MilestoneScore&, const MilestoneScore&) = default;
};

struct DagMatch {
  std::vector<MilestoneScore> milestones;  // in DAG node order
  double average = 0.0;
  bool feasible = true;
};

struct MatchResult {
  std::vector<MilestoneScore> milestones;
  double avgsim_plus = 0.0;
  double score_plus = 0.0;
  std::vector<MilestoneScore> minefields;
  double score_minus = 0.0;
  double final_score = 0.0;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

void to_json(Json& j, const MilestoneScore& s);
void from_json(const Json& j, MilestoneScore& s);
void to_json(Json& j, const MatchResult& r);
void from_json(const Json& j, MatchResult& r);

/// Similarity of milestone `node` placed at `turn`, given the turns already
/// assigned to its referenced milestones. `unresolved` is set when a binding
/// could not be resolved (the score is then 0).
double milestone_similarity(const MilestoneDag& dag, int node, int turn, std::span<const int> turns,
                            std::span<const Snapshot> snapshots, bool* unresolved = nullptr);

/// Turns where a node can score, or nullopt when every turn must be considered
/// (nodes referenced by a guardrail).
std::optional<std::vector<int>> candidate_turns(const MilestoneDag& dag, int node, std::span<const Snapshot> snapshots);

MatchProblem build_match_problem(const MilestoneDag& dag, std::span<const Snapshot> snapshots, bool strict = false);

/// Best order-respecting assignment of milestones to turns. An empty DAG scores 0.
DagMatch match_milestones(const MilestoneDag& dag, std::span<const Snapshot> snapshots, bool strict = false);

/// score_plus if the minefield DAG scores exactly 0, else 0.
double final_score(double score_plus, const MilestoneDag& minefields, std::span<const Snapshot> snapshots,
                   bool strict = false);

MatchResult evaluate(const MilestoneDag& milestones, const MilestoneDag& minefields,
                     std::span<const Snapshot> snapshots, bool strict = false);

}  // namespace toolsim
