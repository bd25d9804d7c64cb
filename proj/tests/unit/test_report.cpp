#include <gtest/gtest.h>

#include "toolsim/report.hpp"

using namespace toolsim;

namespace {

RunRecord record(std::string id, double score, int turns, std::vector<std::string> categories,
                 std::vector<std::string> augmentations) {
  RunRecord r;
  r.scenario_id = std::move(id);
  r.evaluation.final_score = score;
  r.turn_count = turns;
  r.categories = std::move(categories);
  r.augmentations = std::move(augmentations);
  r.termination = Termination::EndConversation;
  return r;
}

}  // namespace

TEST(Report, MeansPerColumn) {
  const std::vector<RunRecord> records{record("a", 1.0, 6, {"STC", "SUT"}, {"0 DT"}),
                                       record("b", 0.25, 14, {"MTC", "SD"}, {"0 DT"}),
                                       record("c", 0.5, 10, {"MTC"}, {"TNS", "ATS"})};
  const auto report = aggregate(records);
  EXPECT_EQ(report.overall.count, 3);
  EXPECT_DOUBLE_EQ(*report.overall.score, 175.0 / 3.0);
  EXPECT_DOUBLE_EQ(*report.overall.turns, 10.0);
  EXPECT_EQ(report.categories.at("MTC").count, 2);
  EXPECT_DOUBLE_EQ(*report.categories.at("MTC").score, 37.5);
  EXPECT_DOUBLE_EQ(*report.categories.at("MTC").turns, 12.0);
  EXPECT_DOUBLE_EQ(*report.categories.at("STC").score, 100.0);
  EXPECT_FALSE(report.categories.at("II").score.has_value());
  EXPECT_EQ(report.categories.at("II").count, 0);
  EXPECT_DOUBLE_EQ(*report.augmentations.at("0 DT").score, 62.5);
  EXPECT_DOUBLE_EQ(*report.augmentations.at("TNS").turns, 10.0);
  EXPECT_EQ(report.augmentations.at("ATS").count, 1);
  EXPECT_FALSE(report.augmentations.at("10 DT").turns.has_value());
}

TEST(Report, EmptyInput) {
  const auto report = aggregate({});
  EXPECT_EQ(report.overall.count, 0);
  EXPECT_FALSE(report.overall.score.has_value());
  EXPECT_EQ(report.categories.size(), 7u);
  EXPECT_EQ(report.augmentations.size(), 8u);
}

TEST(Report, OrderDoesNotChangeTheMean) {
  std::vector<RunRecord> records;
  for (int i = 0; i < 50; ++i) records.push_back(record("r" + std::to_string(i), 0.1 * (i % 7) + 1e-9 * i, i, {"C"}, {"0 DT"}));
  const auto forward = aggregate(records);
  std::reverse(records.begin(), records.end());
  EXPECT_EQ(aggregate(records), forward);
}

TEST(Report, JsonShape) {
  const std::vector<RunRecord> records{record("a", 1.0, 6, {"STC"}, {"0 DT"})};
  const auto j = report_to_json(aggregate(records));
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["overall"], (Json{{"count", 1}, {"score", 100.0}, {"turns", 6.0}}));
  ASSERT_EQ(j["categories"].size(), 7u);
  EXPECT_EQ(j["categories"][0]["label"], "STC");
  EXPECT_EQ(j["categories"][1]["score"], nullptr);
  ASSERT_EQ(j["augmentations"].size(), 8u);
  EXPECT_EQ(j["augmentations"][0]["label"], "0 DT");
  EXPECT_EQ(j["augmentations"].back()["label"], "ATS");
}

TEST(Report, TableShowsValuesAndGaps) {
  const std::vector<RunRecord> records{record("a", 0.5, 7, {"SD"}, {"3 DT"})};
  const auto table = report_to_table(aggregate(records));
  EXPECT_NE(table.find("   50.00"), std::string::npos) << table;
  EXPECT_NE(table.find("    7.00"), std::string::npos) << table;
  EXPECT_NE(table.find("       -"), std::string::npos) << table;
  EXPECT_NE(table.find("     n=1"), std::string::npos) << table;
  EXPECT_NE(table.find("Overall"), std::string::npos) << table;
}
