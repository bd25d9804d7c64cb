#include <benchmark/benchmark.h>

#include <random>

#include "random_instances.hpp"
#include "shipped.hpp"
#include "toolsim/catalog.hpp"
#include "toolsim/evaluation.hpp"
#include "toolsim/session.hpp"
#include "toolsim/similarity.hpp"
#include "toolsim/topo_matcher.hpp"

using namespace toolsim;

namespace {

void BM_SolveMatch(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  std::mt19937_64 rng(1);
  std::vector<MatchProblem> problems;
  for (int i = 0; i < 32; ++i) {
    auto inst = oracle::make_random_instance(rng, m, n, 0.2);
    problems.push_back(std::move(inst.problem));
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_match(problems[i++ % problems.size()]).score);
}
BENCHMARK(BM_SolveMatch)->Args({4, 8})->Args({4, 30})->Args({6, 30})->Args({8, 60});

void BM_DbSimilarity(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  ColumnMatcher exact{MatcherKind::Exact, nullptr, std::nullopt, 0, 0};
  ColumnMatcher rouge{MatcherKind::RougeL, nullptr, std::nullopt, 0, 0};
  std::vector<ResolvedRow> targets;
  Json rows = Json::array();
  for (int i = 0; i < k; ++i) {
    const auto name = "contact " + std::to_string(i);
    targets.push_back({{"name", &exact, name}, {"content", &rouge, "buy milk and bread on the way home " + name}});
    rows.push_back(Json{{"name", name}, {"content", "buy bread on the way " + name}});
  }
  for (auto _ : state) benchmark::DoNotOptimize(db_similarity(targets, rows, Cardinality::AtLeast));
}
BENCHMARK(BM_DbSimilarity)->DenseRange(1, 5);

void BM_RougeL(benchmark::State& state) {
  const auto words = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  const std::vector<std::string> vocab{"send", "a", "message", "to", "john", "buy", "milk", "at", "noon", "the"};
  std::string a, b;
  for (std::size_t i = 0; i < words; ++i) {
    a += vocab[rng() % vocab.size()] + " ";
    b += vocab[rng() % vocab.size()] + " ";
  }
  for (auto _ : state) benchmark::DoNotOptimize(rouge_l_f(a, b));
}
BENCHMARK(BM_RougeL)->Arg(4)->Arg(12)->Arg(64);

void BM_ExecuteBatch(benchmark::State& state) {
  const auto scenario = shipped::scenario("murphy_parallel_cellular");
  const std::vector<NamedCall> batch{
      {"set_cellular_service_status", Json{{"on", true}}, true},
      {"send_message", Json{{"phone_number", "+12453344098"}, {"content", "See you at the show."}}, true},
      {"search_contacts", Json{{"name", "Fredrik"}}, true}};
  for (auto _ : state) {
    WorldState world = scenario.initial_state;
    benchmark::DoNotOptimize(execute_batch(Catalog::standard(), batch, world, 2));
  }
}
BENCHMARK(BM_ExecuteBatch);

void BM_GoldenSessionAndEvaluation(benchmark::State& state) {
  const auto scenario = shipped::scenario("send_message_cellular_off");
  for (auto _ : state) {
    auto agent = shipped::adapter(scenario, Role::Agent);
    auto user = shipped::adapter(scenario, Role::User);
    const auto t = run_session(scenario, agent, user);
    benchmark::DoNotOptimize(evaluate(scenario.milestones, scenario.minefields, t.snapshots).final_score);
  }
}
BENCHMARK(BM_GoldenSessionAndEvaluation);

}  // namespace

BENCHMARK_MAIN();
