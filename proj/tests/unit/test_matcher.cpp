#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "random_instances.hpp"
#include "toolsim/topo_matcher.hpp"

using namespace toolsim;

namespace {

MatchProblem table_problem(int n, std::vector<std::vector<double>> table, std::vector<std::pair<int, int>> edges) {
  MatchProblem p;
  p.num_turns = n;
  p.nodes.resize(table.size());
  p.edges = std::move(edges);
  p.similarity = [table = std::move(table)](int x, int t, std::span<const int>) {
    return table[static_cast<std::size_t>(x)][static_cast<std::size_t>(t - 1)];
  };
  return p;
}

void expect_matches_oracle(const MatchProblem& p, const std::string& label) {
  const auto got = solve_match(p);
  const int m = static_cast<int>(p.nodes.size());
  const auto want = oracle::brute_force_match(m, p.num_turns, p.edges, p.strict, p.similarity);
  ASSERT_EQ(got.feasible, want.feasible) << label;
  if (!want.feasible) return;
  const double want_score = m == 0 ? 0.0 : want.best_sum / m;
  ASSERT_EQ(got.score, want_score) << label;
  // The reported assignment must itself be valid and achieve the score.
  std::vector<double> sims;
  for (int x = 0; x < m; ++x) sims.push_back(p.similarity(x, got.turns[static_cast<std::size_t>(x)], got.turns));
  ASSERT_EQ(oracle::fsum(sims), want.best_sum) << label;
  for (auto [u, v] : p.edges) {
    const int a = got.turns[static_cast<std::size_t>(u)], b = got.turns[static_cast<std::size_t>(v)];
    ASSERT_TRUE(p.strict ? a < b : a <= b) << label;
  }
}

}  // namespace

TEST(TopologicalOrder, PrefersSmallestIndex) {
  std::vector<std::pair<int, int>> edges{{2, 0}, {3, 1}};
  EXPECT_EQ(topological_order(4, edges), (std::vector<int>{2, 0, 3, 1}));
}

TEST(TopologicalOrder, RejectsCycle) {
  std::vector<std::pair<int, int>> edges{{0, 1}, {1, 2}, {2, 0}};
  EXPECT_THROW(topological_order(3, edges), std::invalid_argument);
}

TEST(SolveMatch, EmptyProblemScoresZero) {
  MatchProblem p;
  p.num_turns = 3;
  p.similarity = [](int, int, std::span<const int>) { return 1.0; };
  const auto out = solve_match(p);
  EXPECT_TRUE(out.feasible);
  EXPECT_EQ(out.score, 0.0);
}

TEST(SolveMatch, OrderConstraintForcesTradeoff) {
  // Node 0 is best late, node 1 is best early, but 0 must precede 1.
  auto p = table_problem(3, {{0.1, 0.2, 1.0}, {1.0, 0.3, 0.2}}, {{0, 1}});
  const auto out = solve_match(p);
  EXPECT_EQ(out.turns, (std::vector<int>{3, 3}));
  EXPECT_EQ(out.score, oracle::fsum(std::vector<double>{1.0, 0.2}) / 2);
}

TEST(SolveMatch, TiesGoToEarliestTurns) {
  auto p = table_problem(4, {{1, 1, 1, 1}, {0, 1, 1, 1}}, {{0, 1}});
  EXPECT_EQ(solve_match(p).turns, (std::vector<int>{1, 2}));
}

TEST(SolveMatch, StrictNeedsDistinctTurns) {
  auto p = table_problem(1, {{1.0}, {1.0}}, {{0, 1}});
  p.strict = true;
  EXPECT_FALSE(solve_match(p).feasible);
  p.strict = false;
  EXPECT_EQ(solve_match(p).score, 1.0);
}

TEST(SolveMatch, RefMustBeAncestor) {
  auto p = table_problem(2, {{1, 1}, {1, 1}}, {});
  p.nodes[1].refs = {0};
  EXPECT_THROW(solve_match(p), std::invalid_argument);
}

TEST(SolveMatch, SparseCandidatesAreLossless) {
  auto p = table_problem(5, {{0, 0.5, 0, 0, 0.9}, {0, 0, 0.7, 0, 0}}, {{0, 1}});
  p.nodes[0].candidates = std::vector<int>{2, 5};
  p.nodes[1].candidates = std::vector<int>{3};
  expect_matches_oracle(p, "sparse");
  EXPECT_EQ(solve_match(p).turns, (std::vector<int>{2, 3}));
}

TEST(SolveMatch, RandomInstancesMatchExhaustiveSearch) {
  std::mt19937_64 rng(20240601);
  int with_refs = 0;
  for (int i = 0; i < 400; ++i) {
    auto inst = oracle::make_random_instance(rng, 4, 8, 0.2, i % 5 == 0);
    with_refs += inst.has_refs;
    expect_matches_oracle(inst.problem, "instance " + std::to_string(i));
  }
  EXPECT_GE(with_refs, 60);
}

TEST(SolveMatch, LargerRandomInstancesMatchExhaustiveSearch) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 40; ++i) {
    auto inst = oracle::make_random_instance(rng, 5, 10, 0.3);
    expect_matches_oracle(inst.problem, "instance " + std::to_string(i));
  }
}
