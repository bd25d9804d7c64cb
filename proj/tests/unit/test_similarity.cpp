#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "toolsim/assignment.hpp"
#include "toolsim/similarity.hpp"

using namespace toolsim;

namespace {

std::string join(const std::vector<std::string>& tokens, std::mt19937_64& rng) {
  static const char* separators[] = {" ", ", ", "  ", "! ", "\t", " - "};
  std::uniform_int_distribution<int> pick(0, 5);
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += separators[pick(rng)];
    out += tokens[i];
  }
  return out;
}

}  // namespace

TEST(RougeTokens, LowercasesAndSplitsOnPunctuation) {
  EXPECT_EQ(rouge_tokens("Buy chocolate-milk, NOW!"), (std::vector<std::string>{"buy", "chocolate", "milk", "now"}));
  EXPECT_TRUE(rouge_tokens(" ,.; ").empty());
  EXPECT_EQ(rouge_tokens("café ok"), (std::vector<std::string>{"café", "ok"}));
}

TEST(RougeL, WorkedExamples) {
  EXPECT_EQ(rouge_l_f("send message to John", "send message to John"), 1.0);
  EXPECT_EQ(rouge_l_f("buy chocolate milk", "buy milk"), 0.8);
  EXPECT_EQ(rouge_l_f("", "hello"), 0.0);
  EXPECT_EQ(rouge_l_f("hello", ""), 0.0);
  EXPECT_EQ(rouge_l_f("", ""), 1.0);
  EXPECT_EQ(rouge_l_f("a b", "c d"), 0.0);
}

TEST(RougeL, MatchesIndependentLcsOnRandomPairs) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> vocab{"buy", "milk", "send", "to", "john", "the", "a", "reminder", "at", "noon"};
  std::uniform_int_distribution<std::size_t> word(0, vocab.size() - 1);
  std::uniform_int_distribution<int> len(0, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> a, b;
    for (int i = len(rng); i > 0; --i) a.push_back(vocab[word(rng)]);
    for (int i = len(rng); i > 0; --i) b.push_back(vocab[word(rng)]);
    const std::string ra = join(a, rng), rb = join(b, rng);
    ASSERT_EQ(lcs_length(a, b), oracle::lcs(a, b));
    ASSERT_EQ(rouge_l_f(ra, rb), oracle::rouge_f_rational(oracle::lcs(a, b), a.size(), b.size()))
        << ra << " | " << rb;
    ASSERT_EQ(rouge_l_f(ra, ra), 1.0);
    ASSERT_LE(rouge_l_f(ra, rb), 1.0);
  }
}

TEST(GeometricMean, CanonicalForm) {
  EXPECT_EQ(geometric_mean({}), 1.0);
  EXPECT_EQ(geometric_mean({0.5, 0.0, 1.0}), 0.0);
  EXPECT_EQ(geometric_mean({1.0, 0.8}), std::sqrt(0.8));
  EXPECT_EQ(geometric_mean({0.3, 0.9, 0.5}), oracle::canonical_geomean({0.9, 0.5, 0.3}));
}

TEST(ScoreColumn, MatcherKinds) {
  ColumnMatcher exact{MatcherKind::Exact, "x", std::nullopt, 0, 0};
  Json x = "x", y = "y", null;
  EXPECT_EQ(score_column(exact, "x", &x), 1.0);
  EXPECT_EQ(score_column(exact, "x", &y), 0.0);
  EXPECT_EQ(score_column(exact, "x", nullptr), 0.0);

  ColumnMatcher tol{MatcherKind::NumericAbsTol, 10, std::nullopt, 0.5, 0};
  Json near = 10.4, far = 10.6;
  EXPECT_EQ(score_column(tol, 10, &near), 1.0);
  EXPECT_EQ(score_column(tol, 10, &far), 0.0);

  ColumnMatcher any{MatcherKind::Any, nullptr, std::nullopt, 0, 0};
  EXPECT_EQ(score_column(any, nullptr, nullptr), 1.0);

  ColumnMatcher geo{MatcherKind::GeoRadius, Json::array({37.8199, -122.4786}), std::nullopt, 0, 1.0};
  Json close = Json::array({37.8250, -122.4790}), away = Json::array({37.3349, -122.0090});
  EXPECT_EQ(score_column(geo, geo.expected, &close), 1.0);
  EXPECT_EQ(score_column(geo, geo.expected, &away), 0.0);

  ColumnMatcher rouge{MatcherKind::RougeL, "buy chocolate milk", std::nullopt, 0, 0};
  Json cand = "Buy milk";
  EXPECT_EQ(score_column(rouge, rouge.expected, &cand), 0.8);
}

TEST(ColumnMatcherJson, RoundTrip) {
  for (const char* text : {R"({"kind":"exact","expected":true})", R"({"kind":"numeric_abs_tol","expected":3,"params":{"tolerance":0.5}})",
                           R"({"kind":"rouge_l","binding":{"source":"m1","path":"/0/name"}})",
                           R"({"kind":"geo_radius","expected":[1,2],"params":{"radius_km":2}})", R"({"kind":"any"})"}) {
    const auto m = Json::parse(text).get<ColumnMatcher>();
    EXPECT_EQ(Json(m).get<ColumnMatcher>(), m) << text;
  }
}

TEST(ColumnValue, CompositeColumns) {
  const Json row{{"latitude", 1.5}, {"longitude", 2.5}, {"content", "x"}};
  EXPECT_EQ(*column_value(row, "content"), "x");
  EXPECT_EQ(*column_value(row, "latitude,longitude"), Json::array({1.5, 2.5}));
  EXPECT_FALSE(column_value(row, "missing").has_value());
}

TEST(RowSimilarity, ExactAndRouge) {
  ColumnMatcher exact{MatcherKind::Exact, "+1 555", std::nullopt, 0, 0};
  ColumnMatcher rouge{MatcherKind::RougeL, "buy chocolate milk", std::nullopt, 0, 0};
  ResolvedRow target{{"phone_number", &exact, "+1 555"}, {"content", &rouge, "buy chocolate milk"}};
  const Json row{{"phone_number", "+1 555"}, {"content", "buy milk"}};
  EXPECT_EQ(row_similarity(target, row), std::sqrt(0.8));
  EXPECT_EQ(row_similarity(target, Json{{"content", "buy milk"}}), 0.0);
}

TEST(DbSimilarity, AssignmentIsPermutationInvariant) {
  ColumnMatcher exact{MatcherKind::Exact, nullptr, std::nullopt, 0, 0};
  std::vector<ResolvedRow> targets{{{"name", &exact, "a"}}, {{"name", &exact, "b"}}};
  const Json rows = Json::array({Json{{"name", "b"}}, Json{{"name", "a"}}});
  EXPECT_EQ(db_similarity(targets, rows, Cardinality::AtLeast), 1.0);
  EXPECT_EQ(db_similarity(targets, rows, Cardinality::Exact), 1.0);
  const Json three = Json::array({Json{{"name", "b"}}, Json{{"name", "a"}}, Json{{"name", "c"}}});
  EXPECT_EQ(db_similarity(targets, three, Cardinality::AtLeast), 1.0);
  EXPECT_EQ(db_similarity(targets, three, Cardinality::Exact), 0.0);
  EXPECT_EQ(db_similarity(targets, Json::array({Json{{"name", "a"}}}), Cardinality::AtLeast), 0.0);
}

TEST(Assignment, HungarianMatchesBruteForceCost) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + trial % 5, r = k + trial % 3;
    std::vector<std::vector<double>> cost(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(r)));
    for (auto& row : cost) {
      for (auto& c : row) c = std::round(u(rng));  // integers keep sums exact
    }
    const auto got = solve_assignment(cost);
    std::vector<int> cols(static_cast<std::size_t>(r));
    std::iota(cols.begin(), cols.end(), 0);
    double best = 1e18;
    do {
      double s = 0;
      for (int i = 0; i < k; ++i) s += cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols[static_cast<std::size_t>(i)])];
      best = std::min(best, s);
    } while (std::next_permutation(cols.begin(), cols.end()));
    ASSERT_EQ(got.cost, best);
    std::set<int> used(got.column_of_row.begin(), got.column_of_row.end());
    ASSERT_EQ(used.size(), static_cast<std::size_t>(k));
  }
}

TEST(Assignment, BestGeomeanMatchesBruteForce) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 1 + trial % 5;
    const int r = std::max(1, k - 1 + static_cast<int>(rng() % 4));
    std::vector<std::vector<double>> d(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(r)));
    for (auto& row : d) {
      for (auto& x : row) {
        const double p = u(rng);
        x = p < 0.2 ? 0.0 : p < 0.35 ? 1.0 : p < 0.45 ? 0.5 : u(rng);
      }
    }
    ASSERT_EQ(best_assignment_geomean(d), oracle::brute_force_assignment(d)) << "trial " << trial;
  }
}
