#include "toolsim/milestone.hpp"

#include <algorithm>
#include <set>

#include "toolsim/topo_matcher.hpp"

namespace toolsim {

namespace {

void collect_bindings(const ColumnMatcher& m, std::vector<std::string>& out) {
  if (m.binding) out.push_back(m.binding->source);
}

void collect_bindings(const RowMatchers& row, std::vector<std::string>& out) {
  for (const auto& [_, m] : row) collect_bindings(m, out);
}

Json row_json(const RowMatchers& row) {
  Json j = Json::object();
  for (const auto& [name, m] : row) j[name] = m;
  return j;
}

RowMatchers row_from_json(const Json& j) {
  RowMatchers row;
  for (const auto& [name, m] : j.items()) row.emplace(name, m.get<ColumnMatcher>());
  return row;
}

std::vector<std::string> binding_sources(const Milestone& m) {
  std::vector<std::string> out;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, DbTarget>) {
          for (const auto& row : t.rows) collect_bindings(row, out);
        } else if constexpr (std::is_same_v<T, TraceTarget>) {
          if (t.arguments) collect_bindings(*t.arguments, out);
          if (t.result) collect_bindings(t.result->matcher, out);
        } else if constexpr (std::is_same_v<T, MessageTarget>) {
          collect_bindings(t.content, out);
        }
      },
      m.target);
  return out;
}

}  // namespace

std::vector<std::string> referenced_milestones(const Milestone& m) {
  auto out = binding_sources(m);
  if (const auto* g = std::get_if<GuardrailTarget>(&m.target)) {
    out.push_back(g->from);
    out.push_back(g->to);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::string> trace_tool(const Milestone& m) {
  if (const auto* t = std::get_if<TraceTarget>(&m.target)) return t->tool;
  return std::nullopt;
}

int MilestoneDag::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::pair<int, int>> MilestoneDag::index_edges() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& [from, to] : edges) {
    const int u = index_of(from);
    const int v = index_of(to);
    if (u < 0) throw MilestoneError("edge references unknown milestone '" + from + "'");
    if (v < 0) throw MilestoneError("edge references unknown milestone '" + to + "'");
    out.emplace_back(u, v);
  }
  return out;
}

void MilestoneDag::validate() const {
  std::set<std::string> ids;
  for (const auto& n : nodes) {
    if (n.id.empty()) throw MilestoneError("milestone with empty id");
    if (!ids.insert(n.id).second) throw MilestoneError("duplicate milestone id '" + n.id + "'");
  }
  const auto idx = index_edges();
  std::vector<int> order;
  try {
    order = topological_order(static_cast<int>(nodes.size()), idx);
  } catch (const std::invalid_argument&) {
    throw MilestoneError("milestone graph is cyclic");
  }
  // ancestors[v] as sets of indices
  std::vector<std::set<int>> ancestors(nodes.size());
  std::vector<std::vector<int>> preds(nodes.size());
  for (auto [u, v] : idx) preds[static_cast<std::size_t>(v)].push_back(u);
  for (int v : order) {
    for (int u : preds[static_cast<std::size_t>(v)]) {
      ancestors[static_cast<std::size_t>(v)].insert(u);
      ancestors[static_cast<std::size_t>(v)].insert(ancestors[static_cast<std::size_t>(u)].begin(),
                                                    ancestors[static_cast<std::size_t>(u)].end());
    }
  }
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    const auto& node = nodes[v];
    for (const auto& src : binding_sources(node)) {
      const int u = index_of(src);
      if (u < 0) throw MilestoneError("milestone '" + node.id + "' binds to unknown milestone '" + src + "'");
      if (!ancestors[v].count(u)) {
        throw MilestoneError("milestone '" + node.id + "' binds to '" + src + "', which is not an ancestor");
      }
      if (!trace_tool(nodes[static_cast<std::size_t>(u)])) {
        throw MilestoneError("milestone '" + node.id + "' binds to '" + src + "', which is not a trace milestone");
      }
    }
    if (const auto* g = std::get_if<GuardrailTarget>(&node.target)) {
      for (const auto& ref : {g->from, g->to}) {
        const int u = index_of(ref);
        if (u < 0) throw MilestoneError("guardrail '" + node.id + "' references unknown milestone '" + ref + "'");
        if (!ancestors[v].count(u)) {
          throw MilestoneError("guardrail '" + node.id + "' references '" + ref + "', which is not an ancestor");
        }
      }
    }
  }
}

void to_json(Json& j, const Milestone& m) {
  Json target;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, DbTarget>) {
          Json rows = Json::array();
          for (const auto& r : t.rows) rows.push_back(row_json(r));
          target = Json{{"type", "db"},
                        {"db", to_string(t.db)},
                        {"rows", rows},
                        {"cardinality", t.cardinality == Cardinality::Exact ? "exact" : "at_least"}};
        } else if constexpr (std::is_same_v<T, TraceTarget>) {
          target = Json{{"type", "trace"}, {"tool", t.tool}, {"require_success", t.require_success}};
          if (t.arguments) target["arguments"] = row_json(*t.arguments);
          if (t.result) target["result"] = Json{{"path", t.result->path}, {"matcher", t.result->matcher}};
        } else if constexpr (std::is_same_v<T, MessageTarget>) {
          target = Json{{"type", "message"}, {"sender", t.sender}, {"recipient", t.recipient}, {"content", t.content}};
        } else {
          target = Json{{"type", "guardrail"}, {"db", to_string(t.db)}, {"from", t.from}, {"to", t.to}};
        }
      },
      m.target);
  j = Json{{"id", m.id}, {"target", target}};
  if (!m.description.empty()) j["description"] = m.description;
}

void from_json(const Json& j, Milestone& m) {
  m.id = j.at("id").get<std::string>();
  m.description = j.value("description", std::string{});
  const auto& t = j.at("target");
  const auto type = t.at("type").get<std::string>();
  if (type == "db") {
    DbTarget d;
    d.db = parse_database(t.at("db").get<std::string>());
    for (const auto& r : t.at("rows")) d.rows.push_back(row_from_json(r));
    const auto card = t.value("cardinality", std::string("at_least"));
    if (card == "exact") {
      d.cardinality = Cardinality::Exact;
    } else if (card != "at_least") {
      throw MilestoneError("unknown cardinality '" + card + "'");
    }
    m.target = std::move(d);
  } else if (type == "trace") {
    TraceTarget tr;
    tr.tool = t.at("tool").get<std::string>();
    if (auto it = t.find("arguments"); it != t.end() && !it->is_null()) tr.arguments = row_from_json(*it);
    tr.require_success = t.value("require_success", true);
    if (auto it = t.find("result"); it != t.end() && !it->is_null()) {
      tr.result = ResultMatcher{it->value("path", std::string{}), it->at("matcher").get<ColumnMatcher>()};
    }
    m.target = std::move(tr);
  } else if (type == "message") {
    m.target = MessageTarget{t.at("sender").get<Role>(), t.at("recipient").get<Role>(),
                             t.at("content").get<ColumnMatcher>()};
  } else if (type == "guardrail") {
    m.target = GuardrailTarget{parse_database(t.at("db").get<std::string>()), t.at("from").get<std::string>(),
                               t.at("to").get<std::string>()};
  } else {
    throw MilestoneError("unknown milestone target type '" + type + "'");
  }
}

void to_json(Json& j, const MilestoneDag& d) {
  Json edges = Json::array();
  for (const auto& [u, v] : d.edges) edges.push_back(Json::array({u, v}));
  j = Json{{"nodes", d.nodes}, {"edges", edges}};
}

void from_json(const Json& j, MilestoneDag& d) {
  d = MilestoneDag{};
  d.nodes = j.value("nodes", std::vector<Milestone>{});
  for (const auto& e : j.value("edges", Json::array())) {
    if (!e.is_array() || e.size() != 2) throw MilestoneError("edge must be a [from, to] pair");
    d.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
}

}  // namespace toolsim
