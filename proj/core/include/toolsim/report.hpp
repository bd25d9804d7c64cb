#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "toolsim/runner.hpp"

namespace toolsim {

struct ReportCell {
  int count = 0;
  std::optional<double> score;  // mean final score x 100
  std::optional<double> turns;  // mean turn count

  friend bool operator==(const ReportCell&, const ReportCell&) = default;
};

/// Mean scores and turn counts overall, per scenario category and per
/// augmentation column. A record contributes to every category it carries;
/// each record is weighted equally.
struct Report {
  ReportCell overall;
  std::map<std::string, ReportCell> categories;  // STC, MTC, SUT, MUT, SD, C, II
  std::map<std::string, ReportCell> augmentations;  // 0 DT ... ATS

  friend bool operator==(const Report&, const Report&) = default;
};

Report aggregate(std::span<const RunRecord> records);

/// Structured form: {"schema_version", "overall", "categories", "augmentations"}
/// with columns in report order.
Json report_to_json(const Report& report);

/// Two fixed-width tables (scores, then turn counts) with one column per
/// category and augmentation.
std::string report_to_table(const Report& report);

}  // namespace toolsim
