#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "toolsim/exact_sum.hpp"

namespace toolsim {

/// One node of an abstract matching problem.
///
/// `candidates` lists the turns (1-based, ascending) where the node may score.
/// std::nullopt means every turn. Restricting candidates is only valid if, for
/// any turn t outside the list, moving the node from t to t-1 never lowers its
/// own similarity or that of a node referencing it. Two shapes satisfy this:
/// similarity is 0 off the list (sparse), or it is the same as on the previous
/// turn (step). Nodes referenced by order-sensitive dependents must use nullopt.
struct MatchNode {
  std::vector<int> refs;  // nodes whose turns the similarity reads; must be ancestors
  std::optional<std::vector<int>> candidates;
};

/// similarity(node, turn, turns): `turns[i]` is the turn already assigned to node i
/// (0 while unassigned). It is only consulted for the node's refs.
using MatchSimilarity = std::function<double(int node, int turn, std::span<const int> turns)>;

struct MatchProblem {
  int num_turns = 0;
  std::vector<MatchNode> nodes;
  std::vector<std::pair<int, int>> edges;  // (u, v): t(u) <= t(v), or t(u) < t(v) when strict
  bool strict = false;
  MatchSimilarity similarity;
};

struct MatchOutcome {
  bool feasible = true;
  std::vector<int> turns;  // per node, 1-based; 0 if infeasible
  std::vector<double> similarities;  // per node at its assigned turn
  ExactSum total;
  double score = 0.0;  // total / m, 0 for an empty problem
};

/// Maximizes the mean node similarity over all order-respecting assignments of
/// nodes to turns (several nodes may share a turn unless strict). Exact: sums
/// are accumulated without rounding, ties go to the lexicographically smallest
/// turn vector. Throws std::invalid_argument on cycles, bad indices or refs
/// that are not ancestors.
MatchOutcome solve_match(const MatchProblem& problem);

/// Topological order preferring the smallest index; throws on a cycle.
std::vector<int> topological_order(int num_nodes, std::span<const std::pair<int, int>> edges);

}  // namespace toolsim
