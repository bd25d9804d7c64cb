#include "toolsim/evaluation.hpp"

#include <algorithm>
#include <memory>

namespace toolsim {

namespace {

const Snapshot& at_turn(std::span<const Snapshot> snapshots, int turn) {
  return snapshots[static_cast<std::size_t>(turn - 1)];
}

/// Traces executed at `turn`, read from that turn's snapshot.
template <typename Fn>
void for_each_trace_at(std::span<const Snapshot> snapshots, int turn, Fn&& fn) {
  const auto& traces = at_turn(snapshots, turn).state.traces;
  auto first = traces.end();
  while (first != traces.begin() && std::prev(first)->turn_index >= turn) --first;
  for (auto it = first; it != traces.end(); ++it) {
    if (it->turn_index == turn) fn(*it);
  }
}

std::optional<Json> at_pointer(const Json& value, const std::string& path) {
  try {
    const Json::json_pointer ptr(path);
    if (!value.contains(ptr)) return std::nullopt;
    return std::optional<Json>(std::in_place, value.at(ptr));
  } catch (const Json::exception&) {
    return std::nullopt;
  }
}

class Scorer {
 public:
  Scorer(const MilestoneDag& dag, std::span<const int> turns, std::span<const Snapshot> snapshots)
      : dag_(dag), turns_(turns), snapshots_(snapshots) {}

  bool unresolved() const { return unresolved_; }

  double score(const Milestone& m, int turn) {
    const double s = std::visit([&](const auto& t) { return score_target(t, turn); }, m.target);
    return unresolved_ ? 0.0 : s;
  }

 private:
  std::optional<Json> expected(const ColumnMatcher& m) {
    if (!m.binding) return std::optional<Json>(std::in_place, m.expected);
    const int src = dag_.index_of(m.binding->source);
    const int ts = src < 0 ? 0 : turns_[static_cast<std::size_t>(src)];
    std::optional<Json> found;
    if (ts >= 1) {
      const auto tool = trace_tool(dag_.nodes[static_cast<std::size_t>(src)]);
      for_each_trace_at(snapshots_, ts, [&](const ToolTrace& tr) {
        if (found || !tool || tr.tool_name != *tool || !tr.outcome.ok) return;
        found = at_pointer(tr.outcome.value, m.binding->path);
      });
    }
    if (!found) unresolved_ = true;
    return found;
  }

  double column(const ColumnMatcher& m, const Json* actual) {
    const auto e = expected(m);
    if (!e) return 0.0;
    return score_column(m, *e, actual);
  }

  double score_target(const DbTarget& t, int turn) {
    std::vector<ResolvedRow> rows;
    for (const auto& row : t.rows) {
      ResolvedRow resolved;
      for (const auto& [name, m] : row) {
        auto e = expected(m);
        if (!e) return 0.0;
        resolved.push_back({name, &m, std::move(*e)});
      }
      rows.push_back(std::move(resolved));
    }
    return db_similarity(rows, at_turn(snapshots_, turn).state.rows(t.db), t.cardinality);
  }

  double score_trace(const TraceTarget& t, const ToolTrace& tr) {
    if (tr.tool_name != t.tool) return 0.0;
    if (t.require_success && !tr.outcome.ok) return 0.0;
    std::vector<double> scores;
    if (t.arguments) {
      if (tr.arguments.is_object()) {
        for (const auto& [name, _] : tr.arguments.items()) {
          if (!t.arguments->count(name)) return 0.0;
        }
      }
      for (const auto& [name, m] : *t.arguments) {
        const Json* actual = nullptr;
        if (tr.arguments.is_object()) {
          auto it = tr.arguments.find(name);
          if (it != tr.arguments.end()) actual = &*it;
        }
        scores.push_back(column(m, actual));
      }
    }
    if (t.result) {
      if (!tr.outcome.ok) return 0.0;
      const auto value = at_pointer(tr.outcome.value, t.result->path);
      scores.push_back(column(t.result->matcher, value ? &*value : nullptr));
    }
    return geometric_mean(std::move(scores));
  }

  double score_target(const TraceTarget& t, int turn) {
    double best = 0.0;
    for_each_trace_at(snapshots_, turn, [&](const ToolTrace& tr) { best = std::max(best, score_trace(t, tr)); });
    return best;
  }

  double score_target(const MessageTarget& t, int turn) {
    const auto& msg = at_turn(snapshots_, turn).message;
    if (msg.sender != t.sender || msg.recipient != t.recipient || !msg.text()) return 0.0;
    const Json text = *msg.text();
    return column(t.content, &text);
  }

  double score_target(const GuardrailTarget& t, int) {
    const int a = turns_[static_cast<std::size_t>(dag_.index_of(t.from))];
    const int b = turns_[static_cast<std::size_t>(dag_.index_of(t.to))];
    if (a < 1 || b < 1) return 0.0;
    return db_unchanged_between(snapshots_, a, b, t.db) ? 1.0 : 0.0;
  }

  const MilestoneDag& dag_;
  std::span<const int> turns_;
  std::span<const Snapshot> snapshots_;
  bool unresolved_ = false;
};

bool referenced_by_guardrail(const MilestoneDag& dag, const std::string& id) {
  return std::any_of(dag.nodes.begin(), dag.nodes.end(), [&](const Milestone& m) {
    const auto* g = std::get_if<GuardrailTarget>(&m.target);
    return g && (g->from == id || g->to == id);
  });
}

std::vector<MilestoneScore> scores_for(const MilestoneDag& dag, const MatchOutcome& outcome,
                                       std::span<const Snapshot> snapshots) {
  std::vector<MilestoneScore> out;
  for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
    MilestoneScore s;
    s.id = dag.nodes[i].id;
    s.turn = outcome.turns[i];
    s.similarity = outcome.similarities[i];
    if (s.turn >= 1) milestone_similarity(dag, static_cast<int>(i), s.turn, outcome.turns, snapshots, &s.unresolved);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

double milestone_similarity(const MilestoneDag& dag, int node, int turn, std::span<const int> turns,
                            std::span<const Snapshot> snapshots, bool* unresolved) {
  Scorer scorer(dag, turns, snapshots);
  const double s = scorer.score(dag.nodes[static_cast<std::size_t>(node)], turn);
  if (unresolved) *unresolved = scorer.unresolved();
  return s;
}

std::optional<std::vector<int>> candidate_turns(const MilestoneDag& dag, int node,
                                                std::span<const Snapshot> snapshots) {
  const auto& m = dag.nodes[static_cast<std::size_t>(node)];
  if (referenced_by_guardrail(dag, m.id)) return std::nullopt;
  const int n = static_cast<int>(snapshots.size());
  std::vector<int> out;
  if (const auto* t = std::get_if<TraceTarget>(&m.target)) {
    if (n > 0) {
      for (const auto& tr : snapshots.back().state.traces) {
        if (tr.tool_name == t->tool && tr.turn_index >= 1 && tr.turn_index <= n) out.push_back(tr.turn_index);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  } else if (const auto* msg = std::get_if<MessageTarget>(&m.target)) {
    for (int t = 1; t <= n; ++t) {
      const auto& message = at_turn(snapshots, t).message;
      if (message.sender == msg->sender && message.recipient == msg->recipient) out.push_back(t);
    }
  } else if (const auto* db = std::get_if<DbTarget>(&m.target)) {
    // The similarity only changes on turns where the database does.
    for (int t = 1; t <= n; ++t) {
      if (t == 1 || !at_turn(snapshots, t).state.same_database(at_turn(snapshots, t - 1).state, db->db)) {
        out.push_back(t);
      }
    }
  } else {
    // A guardrail's similarity ignores its own turn.
    if (n > 0) out.push_back(1);
  }
  return out;
}

MatchProblem build_match_problem(const MilestoneDag& dag, std::span<const Snapshot> snapshots, bool strict) {
  MatchProblem p;
  p.num_turns = static_cast<int>(snapshots.size());
  p.edges = dag.index_edges();
  p.strict = strict;
  for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
    MatchNode node;
    for (const auto& ref : referenced_milestones(dag.nodes[i])) {
      const int r = dag.index_of(ref);
      if (r < 0) throw MilestoneError("milestone '" + dag.nodes[i].id + "' references unknown '" + ref + "'");
      node.refs.push_back(r);
    }
    node.candidates = candidate_turns(dag, static_cast<int>(i), snapshots);
    p.nodes.push_back(std::move(node));
  }

  // Nodes without references score independently of the rest of the
  // assignment, so their similarity per turn is computed once.
  const std::size_t m = dag.nodes.size();
  auto cache = std::make_shared<std::vector<std::vector<double>>>(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (p.nodes[i].refs.empty()) (*cache)[i].assign(snapshots.size() + 1, -1.0);
  }
  p.similarity = [&dag, snapshots, cache](int node, int turn, std::span<const int> turns) {
    auto& memo = (*cache)[static_cast<std::size_t>(node)];
    if (!memo.empty()) {
      double& slot = memo[static_cast<std::size_t>(turn)];
      if (slot < 0.0) slot = milestone_similarity(dag, node, turn, turns, snapshots);
      return slot;
    }
    return milestone_similarity(dag, node, turn, turns, snapshots);
  };
  return p;
}

DagMatch match_milestones(const MilestoneDag& dag, std::span<const Snapshot> snapshots, bool strict) {
  DagMatch out;
  if (dag.empty()) return out;
  const auto problem = build_match_problem(dag, snapshots, strict);
  const auto outcome = solve_match(problem);
  out.feasible = outcome.feasible;
  out.average = outcome.score;
  out.milestones = scores_for(dag, outcome, snapshots);
  return out;
}

double final_score(double score_plus, const MilestoneDag& minefields, std::span<const Snapshot> snapshots,
                   bool strict) {
  const auto minus = match_milestones(minefields, snapshots, strict);
  return minus.average == 0.0 ? score_plus : 0.0;
}

MatchResult evaluate(const MilestoneDag& milestones, const MilestoneDag& minefields,
                     std::span<const Snapshot> snapshots, bool strict) {
  MatchResult r;
  const auto plus = match_milestones(milestones, snapshots, strict);
  const auto minus = match_milestones(minefields, snapshots, strict);
  r.milestones = plus.milestones;
  r.avgsim_plus = plus.average;
  r.score_plus = plus.average;
  r.minefields = minus.milestones;
  r.score_minus = minus.average;
  r.final_score = r.score_minus == 0.0 ? r.score_plus : 0.0;
  return r;
}

void to_json(Json& j, const MilestoneScore& s) {
  j = Json{{"id", s.id}, {"turn", s.turn}, {"similarity", s.similarity}, {"unresolved", s.unresolved}};
}

void from_json(const Json& j, MilestoneScore& s) {
  s.id = j.at("id").get<std::string>();
  s.turn = j.at("turn").get<int>();
  s.similarity = j.at("similarity").get<double>();
  s.unresolved = j.value("unresolved", false);
}

void to_json(Json& j, const MatchResult& r) {
  j = Json{{"milestones", r.milestones}, {"avgsim_plus", r.avgsim_plus}, {"score_plus", r.score_plus},
           {"minefields", r.minefields}, {"score_minus", r.score_minus}, {"final_score", r.final_score}};
}

void from_json(const Json& j, MatchResult& r) {
  r.milestones = j.at("milestones").get<std::vector<MilestoneScore>>();
  r.avgsim_plus = j.at("avgsim_plus").get<double>();
  r.score_plus = j.at("score_plus").get<double>();
  r.minefields = j.at("minefields").get<std::vector<MilestoneScore>>();
  r.score_minus = j.at("score_minus").get<double>();
  r.final_score = j.at("final_score").get<double>();
}

}  // namespace toolsim
