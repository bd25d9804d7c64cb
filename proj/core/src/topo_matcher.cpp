#include "toolsim/topo_matcher.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>

namespace toolsim {

namespace {

using Mask = std::uint64_t;
constexpr int kMaxNodes = 64;

Mask bit(int i) { return Mask{1} << i; }

struct StateKey {
  Mask ideal = 0;
  std::vector<int> live_turns;  // turns of assigned nodes still referenced by unassigned ones

  friend auto operator<=>(const StateKey&, const StateKey&) = default;
};

struct Partial {
  ExactSum value;
  std::vector<int> turns;
};

bool better(const Partial& a, const Partial& b) {
  const auto order = a.value <=> b.value;
  if (order != 0) return order > 0;
  return a.turns < b.turns;
}

class Solver {
 public:
  explicit Solver(const MatchProblem& p) : p_(p), m_(static_cast<int>(p.nodes.size())) {
    if (m_ > kMaxNodes) throw std::invalid_argument("matcher supports at most 64 nodes");
    order_ = topological_order(m_, p.edges);
    preds_.assign(static_cast<std::size_t>(m_), 0);
    for (auto [u, v] : p.edges) preds_[static_cast<std::size_t>(v)] |= bit(u);
    ancestors_ = preds_;
    for (int x : order_) {
      for (int u = 0; u < m_; ++u) {
        if (preds_[static_cast<std::size_t>(x)] & bit(u)) ancestors_[static_cast<std::size_t>(x)] |= ancestors_[static_cast<std::size_t>(u)];
      }
    }
    referenced_by_.assign(static_cast<std::size_t>(m_), 0);
    for (int x = 0; x < m_; ++x) {
      for (int r : p.nodes[static_cast<std::size_t>(x)].refs) {
        if (r < 0 || r >= m_ || !(ancestors_[static_cast<std::size_t>(x)] & bit(r))) {
          throw std::invalid_argument("node " + std::to_string(x) + " references " + std::to_string(r) +
                                      ", which is not an ancestor");
        }
        referenced_by_[static_cast<std::size_t>(r)] |= bit(x);
      }
    }
    candidate_.assign(static_cast<std::size_t>(m_), std::vector<char>(static_cast<std::size_t>(p.num_turns) + 2, 1));
    if (!p.strict) {
      for (int x = 0; x < m_; ++x) {
        const auto& c = p.nodes[static_cast<std::size_t>(x)].candidates;
        if (!c) continue;
        auto& row = candidate_[static_cast<std::size_t>(x)];
        std::fill(row.begin(), row.end(), 0);
        for (int t : *c) {
          if (t >= 1 && t <= p.num_turns) row[static_cast<std::size_t>(t)] = 1;
        }
      }
    }
  }

  MatchOutcome run() {
    MatchOutcome out;
    out.turns.assign(static_cast<std::size_t>(m_), 0);
    out.similarities.assign(static_cast<std::size_t>(m_), 0.0);
    if (m_ == 0) return out;
    if (p_.num_turns <= 0) {
      out.feasible = false;
      return out;
    }

    std::map<StateKey, Partial> states;
    states.emplace(StateKey{}, Partial{ExactSum{}, std::vector<int>(static_cast<std::size_t>(m_), 0)});
    for (int t = 1; t <= p_.num_turns; ++t) {
      next_.clear();
      turn_ = t;
      for (auto& [key, partial] : states) {
        Partial working = partial;
        extend(0, key.ideal, 0, working);
      }
      states.swap(next_);
    }

    const Mask full = m_ == kMaxNodes ? ~Mask{0} : bit(m_) - 1;
    auto it = states.find(StateKey{full, {}});
    if (it == states.end()) {
      out.feasible = false;
      return out;
    }
    out.turns = it->second.turns;
    out.total = it->second.value;
    for (int x : order_) {
      out.similarities[static_cast<std::size_t>(x)] =
          p_.similarity(x, out.turns[static_cast<std::size_t>(x)], out.turns);
    }
    out.score = out.total.to_double() / static_cast<double>(m_);
    return out;
  }

 private:
  // Decides, for each node in topological order, whether it is assigned at the current turn.
  void extend(std::size_t pos, Mask ideal, Mask added, Partial& partial) {
    if (pos == order_.size()) {
      record(ideal | added, partial);
      return;
    }
    extend(pos + 1, ideal, added, partial);

    const int x = order_[pos];
    const auto xs = static_cast<std::size_t>(x);
    if ((ideal & bit(x)) != 0) return;
    const Mask ready = p_.strict ? ideal : (ideal | added);
    if ((preds_[xs] & ~ready) != 0) return;
    if (!p_.strict && !allowed(x, added)) return;

    const ExactSum saved = partial.value;
    partial.turns[xs] = turn_;
    partial.value.add(p_.similarity(x, turn_, partial.turns));
    extend(pos + 1, ideal, added | bit(x), partial);
    partial.turns[xs] = 0;
    partial.value = saved;
  }

  // Off-candidate placements are kept only where the node first becomes placeable;
  // any optimum can be shifted to such a placement without loss.
  bool allowed(int x, Mask added) const {
    const auto xs = static_cast<std::size_t>(x);
    if (candidate_[xs][static_cast<std::size_t>(turn_)]) return true;
    if (preds_[xs] == 0) return turn_ == 1;
    return (preds_[xs] & added) != 0;
  }

  void record(Mask assigned, const Partial& partial) {
    StateKey key{assigned, {}};
    for (int u = 0; u < m_; ++u) {
      if ((assigned & bit(u)) && (referenced_by_[static_cast<std::size_t>(u)] & ~assigned)) {
        key.live_turns.push_back(partial.turns[static_cast<std::size_t>(u)]);
      }
    }
    auto [it, inserted] = next_.try_emplace(std::move(key), partial);
    if (!inserted && better(partial, it->second)) it->second = partial;
  }

  const MatchProblem& p_;
  int m_;
  std::vector<int> order_;
  std::vector<Mask> preds_;
  std::vector<Mask> ancestors_;
  std::vector<Mask> referenced_by_;
  std::vector<std::vector<char>> candidate_;
  std::map<StateKey, Partial> next_;
  int turn_ = 0;
};

}  // namespace

std::vector<int> topological_order(int num_nodes, std::span<const std::pair<int, int>> edges) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(num_nodes));
  std::vector<int> indegree(static_cast<std::size_t>(num_nodes), 0);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes) throw std::invalid_argument("edge index out of range");
    if (u == v) throw std::invalid_argument("self-loop on node " + std::to_string(u));
    out[static_cast<std::size_t>(u)].push_back(v);
    ++indegree[static_cast<std::size_t>(v)];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int i = 0; i < num_nodes; ++i) {
    if (indegree[static_cast<std::size_t>(i)] == 0) ready.push(i);
  }
  std::vector<int> order;
  while (!ready.empty()) {
    const int u = ready.top();
    ready.pop();
    order.push_back(u);
    for (int v : out[static_cast<std::size_t>(u)]) {
      if (--indegree[static_cast<std::size_t>(v)] == 0) ready.push(v);
    }
  }
  if (static_cast<int>(order.size()) != num_nodes) throw std::invalid_argument("graph contains a cycle");
  return order;
}

MatchOutcome solve_match(const MatchProblem& problem) {
  if (!problem.similarity && !problem.nodes.empty()) throw std::invalid_argument("match problem has no similarity");
  return Solver(problem).run();
}

}  // namespace toolsim
