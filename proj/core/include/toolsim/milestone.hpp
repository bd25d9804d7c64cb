#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "toolsim/similarity.hpp"
#include "toolsim/world_state.hpp"

namespace toolsim {

using RowMatchers = std::map<std::string, ColumnMatcher>;

/// The named database at the matched turn must contain rows like these.
struct DbTarget {
  Database db = Database::Settings;
  std::vector<RowMatchers> rows;
  Cardinality cardinality = Cardinality::AtLeast;

  friend bool operator==(const DbTarget&, const DbTarget&) = default;
};

struct ResultMatcher {
  std::string path;  // JSON pointer into the trace result ("" = whole value)
  ColumnMatcher matcher;

  friend bool operator==(const ResultMatcher&, const ResultMatcher&) = default;
};

/// A call to `tool` executed at the matched turn. Without `arguments` any
/// arguments are accepted; with them, the call must pass exactly those names
/// (a missing one scores 0 unless its matcher is `any`; an extra one scores 0).
struct TraceTarget {
  std::string tool;
  std::optional<RowMatchers> arguments;
  bool require_success = true;
  std::optional<ResultMatcher> result;

  friend bool operator==(const TraceTarget&, const TraceTarget&) = default;
};

/// A text message between two roles at the matched turn.
struct MessageTarget {
  Role sender = Role::Agent;
  Role recipient = Role::User;
  ColumnMatcher content;

  friend bool operator==(const MessageTarget&, const MessageTarget&) = default;
};

/// The database must not change between the turns matched by `from` and `to`.
struct GuardrailTarget {
  Database db = Database::Settings;
  std::string from;
  std::string to;

  friend bool operator==(const GuardrailTarget&, const GuardrailTarget&) = default;
};

using MilestoneTarget = std::variant<DbTarget, TraceTarget, MessageTarget, GuardrailTarget>;

struct Milestone {
  std::string id;
  std::string description;
  MilestoneTarget target;

  friend bool operator==(const Milestone&, const Milestone&) = default;
};

class MilestoneError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MilestoneDag {
  std::vector<Milestone> nodes;
  std::vector<std::pair<std::string, std::string>> edges;

  bool empty() const { return nodes.empty(); }
  /// Index of the node with `id`, or -1.
  int index_of(std::string_view id) const;
  std::vector<std::pair<int, int>> index_edges() const;

  /// Ids are unique, edges name known nodes, the graph is acyclic, and every
  /// binding source and guardrail reference is an ancestor. Binding sources
  /// must be trace milestones. Throws MilestoneError.
  void validate() const;

  friend bool operator==(const MilestoneDag&, const MilestoneDag&) = default;
};

/// Milestone ids a node's similarity depends on (binding sources, guardrail ends).
std::vector<std::string> referenced_milestones(const Milestone& m);
/// Tool names a milestone inspects in traces (empty for non-trace targets).
std::optional<std::string> trace_tool(const Milestone& m);

void to_json(Json& j, const Milestone& m);
void from_json(const Json& j, Milestone& m);
void to_json(Json& j, const MilestoneDag& d);
void from_json(const Json& j, MilestoneDag& d);

}  // namespace toolsim
