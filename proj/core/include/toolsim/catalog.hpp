#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toolsim/fixtures.hpp"
#include "toolsim/tool_error.hpp"
#include "toolsim/tool_schema.hpp"
#include "toolsim/world_state.hpp"

namespace toolsim {

/// Applies a planned call to the live state and returns the result value.
/// Throws ToolError without mutating if the plan no longer applies.
using ToolCommit = std::function<Json(WorldState&)>;

/// Checks preconditions and performs all reads against `pre`, returning the
/// write step. Throws ToolError. Must not retain references to `pre`.
using ToolPlanner = std::function<ToolCommit(const Json& args, const WorldState& pre)>;

struct ToolDefinition {
  ToolSchema schema;
  ToolPlanner plan;
  bool user_only = false;
};

/// A call that has been validated and planned against a fixed state.
struct PreparedCall {
  std::string tool_name;
  Json arguments = Json::object();  // as passed (type-normalized, no defaults); traced
  std::optional<ToolOutcome> failure;  // set when validation or planning failed
  ToolCommit commit;
};

inline constexpr std::string_view kEndConversation = "end_conversation";

class Catalog {
 public:
  explicit Catalog(CatalogFixtures fixtures);

  /// Catalog over the embedded fixtures; constructed once.
  static const Catalog& standard();

  const ToolDefinition* find(std::string_view name) const;
  /// Every tool, name-ordered (includes user-only tools).
  std::vector<ToolSchema> schemas() const;
  /// Tools an agent may be offered, name-ordered.
  std::vector<ToolSchema> agent_schemas() const;
  const CatalogFixtures& fixtures() const { return *fixtures_; }

  PreparedCall prepare(std::string_view name, const Json& args, const WorldState& pre) const;
  /// Commits (or records the failure of) a prepared call and appends its trace.
  ToolOutcome commit(PreparedCall& call, WorldState& state, int turn) const;

  /// Single call: prepare against the live state, then commit.
  ToolOutcome execute(std::string_view name, const Json& args, WorldState& state, int turn) const;

 private:
  std::shared_ptr<const CatalogFixtures> fixtures_;
  std::vector<ToolDefinition> tools_;  // name-ordered
};

struct NamedCall {
  std::string tool_name;
  Json arguments = Json::object();
  /// False when the caller was never given this tool; the call then fails
  /// with UnknownTool even if the catalog has it.
  bool offered = true;
};

/// Parallel execution under race-always semantics: every call is planned
/// against the pre-batch state, then successful calls commit in batch order.
/// Outcomes are returned in batch order; the batch itself never throws.
std::vector<ToolOutcome> execute_batch(const Catalog& catalog, std::span<const NamedCall> calls, WorldState& state,
                                       int turn);

/// Great-circle distance in km (haversine, mean Earth radius 6371 km).
double haversine_km(double lat1, double lon1, double lat2, double lon2);

struct DatetimeInfo {
  std::int64_t year = 1970;
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;
  int second = 0;
  std::string weekday;  // "Monday" ...
};

/// UTC civil time for a unix timestamp.
DatetimeInfo datetime_from_timestamp(std::int64_t ts);
/// Inverse of datetime_from_timestamp; throws ToolError(ValueError) on out-of-range fields.
std::int64_t timestamp_from_datetime(std::int64_t year, int month, int day, int hour, int minute, int second);

}  // namespace toolsim
