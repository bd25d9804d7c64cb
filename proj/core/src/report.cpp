#include "toolsim/report.hpp"

#include <cstdio>
#include <vector>

#include "toolsim/exact_sum.hpp"

namespace toolsim {

namespace {

struct Accumulator {
  int count = 0;
  ExactSum scores;
  long long turns = 0;

  void add(const RunRecord& r) {
    ++count;
    scores += r.evaluation.final_score;
    turns += r.turn_count;
  }

  ReportCell cell() const {
    ReportCell c;
    c.count = count;
    if (count > 0) {
      c.score = scores.to_double() * 100.0 / count;
      c.turns = static_cast<double>(turns) / count;
    }
    return c;
  }
};

std::vector<std::string> category_columns() {
  std::vector<std::string> out;
  for (Category c : kAllCategories) out.emplace_back(to_string(c));
  return out;
}

std::vector<std::string> augmentation_columns() { return {std::begin(kAugmentationColumns), std::end(kAugmentationColumns)}; }

Json cell_json(const ReportCell& c) {
  return Json{{"count", c.count},
              {"score", c.score ? Json(*c.score) : Json(nullptr)},
              {"turns", c.turns ? Json(*c.turns) : Json(nullptr)}};
}

std::string format_value(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

void append_table(std::string& out, const std::string& title, const std::vector<std::string>& labels,
                  const std::vector<const ReportCell*>& cells, std::optional<double> ReportCell::*field) {
  constexpr int kWidth = 8;
  char buf[64];
  out += title;
  out += '\n';
  for (const auto& label : labels) {
    std::snprintf(buf, sizeof buf, "%*s", kWidth, label.c_str());
    out += buf;
  }
  out += '\n';
  for (const auto* cell : cells) {
    std::snprintf(buf, sizeof buf, "%*s", kWidth, format_value(cell->*field).c_str());
    out += buf;
  }
  out += '\n';
  for (const auto* cell : cells) {
    std::snprintf(buf, sizeof buf, "%*s", kWidth, ("n=" + std::to_string(cell->count)).c_str());
    out += buf;
  }
  out += '\n';
}

}  // namespace

Report aggregate(std::span<const RunRecord> records) {
  Accumulator overall;
  std::map<std::string, Accumulator> categories;
  std::map<std::string, Accumulator> augmentations;
  for (const auto& label : category_columns()) categories[label];
  for (const auto& label : augmentation_columns()) augmentations[label];

  for (const auto& r : records) {
    overall.add(r);
    for (const auto& c : r.categories) categories[c].add(r);
    for (const auto& a : r.augmentations) augmentations[a].add(r);
  }

  Report report;
  report.overall = overall.cell();
  for (const auto& [label, acc] : categories) report.categories[label] = acc.cell();
  for (const auto& [label, acc] : augmentations) report.augmentations[label] = acc.cell();
  return report;
}

Json report_to_json(const Report& report) {
  Json categories = Json::array();
  for (const auto& label : category_columns()) {
    Json c = cell_json(report.categories.at(label));
    c["label"] = label;
    categories.push_back(std::move(c));
  }
  Json augmentations = Json::array();
  for (const auto& label : augmentation_columns()) {
    Json c = cell_json(report.augmentations.at(label));
    c["label"] = label;
    augmentations.push_back(std::move(c));
  }
  return Json{{"schema_version", 1},
              {"overall", cell_json(report.overall)},
              {"categories", std::move(categories)},
              {"augmentations", std::move(augmentations)}};
}

std::string report_to_table(const Report& report) {
  std::vector<std::string> labels{"Overall"};
  std::vector<const ReportCell*> cells{&report.overall};
  for (const auto& label : category_columns()) {
    labels.push_back(label);
    cells.push_back(&report.categories.at(label));
  }
  std::vector<std::string> aug_labels;
  std::vector<const ReportCell*> aug_cells;
  for (const auto& label : augmentation_columns()) {
    aug_labels.push_back(label);
    aug_cells.push_back(&report.augmentations.at(label));
  }

  std::string out;
  append_table(out, "Score (mean final score x 100) by category", labels, cells, &ReportCell::score);
  out += '\n';
  append_table(out, "Score (mean final score x 100) by augmentation", aug_labels, aug_cells, &ReportCell::score);
  out += '\n';
  append_table(out, "Mean turn count by category", labels, cells, &ReportCell::turns);
  out += '\n';
  append_table(out, "Mean turn count by augmentation", aug_labels, aug_cells, &ReportCell::turns);
  return out;
}

}  // namespace toolsim
