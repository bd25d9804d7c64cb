#include "toolsim/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "toolsim/assignment.hpp"
#include "toolsim/catalog.hpp"

namespace toolsim {

std::vector<std::string> rouge_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || std::isalnum(c)) {
      current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l_f(std::string_view reference, std::string_view candidate) {
  const auto ref = rouge_tokens(reference);
  const auto cand = rouge_tokens(candidate);
  if (ref.empty() && cand.empty()) return 1.0;
  if (ref.empty() || cand.empty()) return 0.0;
  const auto lcs = lcs_length(ref, cand);
  // 2PR/(P+R) with P = L/|c|, R = L/|r| reduces to 2L/(|r|+|c|); one rounding only.
  return static_cast<double>(2 * lcs) / static_cast<double>(ref.size() + cand.size());
}

double geometric_mean(std::vector<double> values) {
  if (values.empty()) return 1.0;
  std::sort(values.begin(), values.end());
  if (values.front() <= 0.0) return 0.0;
  double product = 1.0;
  for (double v : values) product *= v;
  return std::pow(product, 1.0 / static_cast<double>(values.size()));
}

std::string_view to_string(MatcherKind kind) {
  switch (kind) {
    case MatcherKind::Exact:
      return "exact";
    case MatcherKind::NumericAbsTol:
      return "numeric_abs_tol";
    case MatcherKind::RougeL:
      return "rouge_l";
    case MatcherKind::GeoRadius:
      return "geo_radius";
    case MatcherKind::Any:
      return "any";
  }
  return "exact";
}

MatcherKind parse_matcher_kind(std::string_view name) {
  for (auto k : {MatcherKind::Exact, MatcherKind::NumericAbsTol, MatcherKind::RougeL, MatcherKind::GeoRadius,
                 MatcherKind::Any}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown matcher kind '" + std::string(name) + "'");
}

void to_json(Json& j, const ColumnMatcher& m) {
  j = Json{{"kind", to_string(m.kind)}};
  if (m.binding) {
    j["binding"] = Json{{"source", m.binding->source}, {"path", m.binding->path}};
  } else if (m.kind != MatcherKind::Any) {
    j["expected"] = m.expected;
  }
  if (m.kind == MatcherKind::NumericAbsTol) j["params"] = Json{{"tolerance", m.tolerance}};
  if (m.kind == MatcherKind::GeoRadius) j["params"] = Json{{"radius_km", m.radius_km}};
}

void from_json(const Json& j, ColumnMatcher& m) {
  m = ColumnMatcher{};
  m.kind = parse_matcher_kind(j.at("kind").get<std::string>());
  if (auto it = j.find("binding"); it != j.end()) {
    m.binding = ValueBinding{it->at("source").get<std::string>(), it->at("path").get<std::string>()};
    if (j.contains("expected")) throw std::invalid_argument("matcher has both 'expected' and 'binding'");
  } else if (m.kind != MatcherKind::Any) {
    m.expected = j.at("expected");
  }
  const Json params = j.value("params", Json::object());
  if (m.kind == MatcherKind::NumericAbsTol) {
    m.tolerance = params.value("tolerance", 0.0);
    if (!(m.tolerance >= 0.0)) throw std::invalid_argument("tolerance must be non-negative");
  }
  if (m.kind == MatcherKind::GeoRadius) {
    m.radius_km = params.at("radius_km").get<double>();
    if (!(m.radius_km >= 0.0)) throw std::invalid_argument("radius_km must be non-negative");
  }
}

namespace {

bool is_plain_number(const Json& v) { return v.is_number() && !v.is_boolean(); }

std::optional<std::pair<double, double>> as_point(const Json& v) {
  if (v.is_array() && v.size() == 2 && is_plain_number(v[0]) && is_plain_number(v[1])) {
    return std::pair{v[0].get<double>(), v[1].get<double>()};
  }
  if (v.is_object() && v.contains("latitude") && v.contains("longitude") && is_plain_number(v["latitude"]) &&
      is_plain_number(v["longitude"])) {
    return std::pair{v["latitude"].get<double>(), v["longitude"].get<double>()};
  }
  return std::nullopt;
}

}  // namespace

double score_column(const ColumnMatcher& matcher, const Json& expected, const Json* actual) {
  if (matcher.kind == MatcherKind::Any) return 1.0;
  if (actual == nullptr || actual->is_null()) return expected.is_null() && matcher.kind == MatcherKind::Exact ? 1.0 : 0.0;
  switch (matcher.kind) {
    case MatcherKind::Exact:
      return *actual == expected ? 1.0 : 0.0;
    case MatcherKind::NumericAbsTol:
      if (!is_plain_number(*actual) || !is_plain_number(expected)) return 0.0;
      return std::fabs(actual->get<double>() - expected.get<double>()) <= matcher.tolerance ? 1.0 : 0.0;
    case MatcherKind::RougeL:
      if (!actual->is_string() || !expected.is_string()) return 0.0;
      return rouge_l_f(expected.get_ref<const std::string&>(), actual->get_ref<const std::string&>());
    case MatcherKind::GeoRadius: {
      const auto a = as_point(*actual);
      const auto e = as_point(expected);
      if (!a || !e) return 0.0;
      return haversine_km(a->first, a->second, e->first, e->second) <= matcher.radius_km ? 1.0 : 0.0;
    }
    case MatcherKind::Any:
      break;
  }
  return 1.0;
}

std::optional<Json> column_value(const Json& row, std::string_view column) {
  if (!row.is_object()) return std::nullopt;
  const auto comma = column.find(',');
  if (comma == std::string_view::npos) {
    auto it = row.find(std::string(column));
    if (it == row.end()) return std::nullopt;
    return std::optional<Json>(std::in_place, *it);
  }
  Json parts = Json::array();
  std::size_t start = 0;
  while (start <= column.size()) {
    const auto end = std::min(column.find(',', start), column.size());
    auto it = row.find(std::string(column.substr(start, end - start)));
    if (it == row.end()) return std::nullopt;
    parts.push_back(*it);
    start = end + 1;
  }
  return std::optional<Json>(std::in_place, std::move(parts));
}

double row_similarity(const ResolvedRow& target, const Json& row) {
  std::vector<double> scores;
  scores.reserve(target.size());
  for (const auto& col : target) {
    const auto value = column_value(row, col.column);
    scores.push_back(score_column(*col.matcher, col.expected, value ? &*value : nullptr));
  }
  return geometric_mean(std::move(scores));
}

double best_assignment_geomean(const std::vector<std::vector<double>>& similarity) {
  const std::size_t k = similarity.size();
  if (k == 0) return 1.0;
  const std::size_t r = similarity[0].size();
  if (r < k) return 0.0;

  // Maximizing the product is minimizing the sum of -log(d). Zero entries get
  // a cost no finite-log assignment can reach, so a forced zero shows up as cost >= kZeroCost.
  constexpr double kZeroCost = 1e6;
  std::vector<std::vector<double>> cost(k, std::vector<double>(r));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      const double d = similarity[i][j];
      cost[i][j] = d > 0.0 ? -std::log(d) : kZeroCost;
    }
  }
  const auto best = solve_assignment(cost);
  if (best.cost >= kZeroCost) return 0.0;

  // Several assignments can reach (nearly) the optimal log-cost while their
  // canonical geometric means differ in the last bit. Enumerate every
  // assignment within a small slack of the optimum and keep the largest
  // canonical value, so the result does not depend on which optimum the
  // solver happened to return.
  constexpr double kSlack = 1e-9;
  const double bound = best.cost + kSlack * (1.0 + std::fabs(best.cost));
  std::vector<double> row_min(k);
  for (std::size_t i = 0; i < k; ++i) row_min[i] = *std::min_element(cost[i].begin(), cost[i].end());
  std::vector<double> suffix_min(k + 1, 0.0);
  for (std::size_t i = k; i-- > 0;) suffix_min[i] = suffix_min[i + 1] + row_min[i];

  double result = 0.0;
  std::vector<char> used(r, 0);
  std::vector<double> chosen;
  chosen.reserve(k);
  std::function<void(std::size_t, double)> walk = [&](std::size_t i, double partial) {
    if (i == k) {
      result = std::max(result, geometric_mean(chosen));
      return;
    }
    for (std::size_t j = 0; j < r; ++j) {
      if (used[j]) continue;
      const double next = partial + cost[i][j];
      if (next + suffix_min[i + 1] > bound) continue;
      used[j] = 1;
      chosen.push_back(similarity[i][j]);
      walk(i + 1, next);
      chosen.pop_back();
      used[j] = 0;
    }
  };
  walk(0, 0.0);
  return result;
}

double db_similarity(const std::vector<ResolvedRow>& targets, const Json& rows, Cardinality cardinality) {
  const std::size_t k = targets.size();
  const std::size_t r = rows.is_array() ? rows.size() : 0;
  if (cardinality == Cardinality::Exact && k != r) return 0.0;
  if (r < k) return 0.0;
  std::vector<std::vector<double>> d(k, std::vector<double>(r));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < r; ++j) d[i][j] = row_similarity(targets[i], rows[j]);
  }
  return best_assignment_geomean(d);
}

}  // namespace toolsim
