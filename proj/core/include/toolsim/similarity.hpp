#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toolsim/message.hpp"

namespace toolsim {

/// Lowercased tokens; any byte that is not an ASCII letter or digit separates
/// tokens, except bytes >= 0x80, which are kept so UTF-8 words stay whole.
std::vector<std::string> rouge_tokens(std::string_view text);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// ROUGE-L F1 over rouge_tokens. Both empty -> 1; exactly one empty -> 0.
double rouge_l_f(std::string_view reference, std::string_view candidate);

/// Geometric mean in canonical form: values sorted ascending, multiplied left
/// to right, then raised to 1/k. Any zero gives exactly 0; empty input gives 1.
double geometric_mean(std::vector<double> values);

enum class MatcherKind { Exact, NumericAbsTol, RougeL, GeoRadius, Any };

std::string_view to_string(MatcherKind kind);
MatcherKind parse_matcher_kind(std::string_view name);

/// Expected value taken from the result of the trace matched by an ancestor milestone.
struct ValueBinding {
  std::string source;  // milestone id
  std::string path;  // JSON pointer into the trace result, e.g. "/0/phone_number"

  friend bool operator==(const ValueBinding&, const ValueBinding&) = default;
};

struct ColumnMatcher {
  MatcherKind kind = MatcherKind::Exact;
  Json expected;  // unused when `binding` is set
  std::optional<ValueBinding> binding;
  double tolerance = 0.0;  // NumericAbsTol
  double radius_km = 0.0;  // GeoRadius

  friend bool operator==(const ColumnMatcher&, const ColumnMatcher&) = default;
};

void to_json(Json& j, const ColumnMatcher& m);
void from_json(const Json& j, ColumnMatcher& m);

/// Score in [0, 1] of `actual` against an already-resolved expected value.
/// A missing value (nullptr or JSON null) scores 0 unless the matcher is Any.
/// GeoRadius compares [latitude, longitude] pairs and is binary.
double score_column(const ColumnMatcher& matcher, const Json& expected, const Json* actual);

/// Column value of a record; "a,b" names a composite column assembled into [a, b].
std::optional<Json> column_value(const Json& row, std::string_view column);

struct ResolvedColumn {
  std::string column;
  const ColumnMatcher* matcher = nullptr;
  Json expected;
};
using ResolvedRow = std::vector<ResolvedColumn>;

/// Geometric mean of column scores; a target column absent from `row` scores 0.
double row_similarity(const ResolvedRow& target, const Json& row);

enum class Cardinality { AtLeast, Exact };

/// Best injective assignment of target rows (matrix rows) to snapshot rows
/// (matrix columns), maximizing the geometric mean of the chosen entries.
/// Fewer columns than rows -> 0; no rows -> 1.
double best_assignment_geomean(const std::vector<std::vector<double>>& similarity);

/// Database similarity: best_assignment_geomean over the row_similarity
/// matrix. Cardinality::Exact additionally requires equal row counts.
double db_similarity(const std::vector<ResolvedRow>& targets, const Json& rows, Cardinality cardinality);

}  // namespace toolsim
