#include "toolsim/augmentation.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace toolsim {

namespace {

// SplitMix64: fully specified, so presentation order is identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

 private:
  std::uint64_t state_;
};

std::set<std::string> token_set(std::string_view text) {
  auto tokens = tool_tokens(text);
  return {tokens.begin(), tokens.end()};
}

std::string signature_text(const ToolSchema& s) { return s.name + " " + s.description; }

std::pair<std::size_t, std::size_t> jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t inter = 0;
  for (const auto& t : a) inter += b.count(t);
  const std::size_t uni = a.size() + b.size() - inter;
  return {inter, uni};
}

// a/b > c/d with 0/0 treated as 0.
bool fraction_greater(std::pair<std::size_t, std::size_t> lhs, std::pair<std::size_t, std::size_t> rhs) {
  if (lhs.second == 0) return false;
  if (rhs.second == 0) return lhs.first > 0;
  return lhs.first * rhs.second > rhs.first * lhs.second;
}

Json distraction_json(Distraction d) {
  switch (d) {
    case Distraction::Zero:
      return 0;
    case Distraction::Three:
      return 3;
    case Distraction::Ten:
      return 10;
    case Distraction::All:
      return "all";
  }
  return 0;
}

}  // namespace

std::string_view to_string(Distraction d) {
  switch (d) {
    case Distraction::Zero:
      return "0";
    case Distraction::Three:
      return "3";
    case Distraction::Ten:
      return "10";
    case Distraction::All:
      return "all";
  }
  return "0";
}

Distraction parse_distraction(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "all") return Distraction::All;
    if (s == "0") return Distraction::Zero;
    if (s == "3") return Distraction::Three;
    if (s == "10") return Distraction::Ten;
  } else if (j.is_number_integer()) {
    switch (j.get<int>()) {
      case 0:
        return Distraction::Zero;
      case 3:
        return Distraction::Three;
      case 10:
        return Distraction::Ten;
      default:
        break;
    }
  }
  throw std::invalid_argument("distraction must be 0, 3, 10 or \"all\", got " + j.dump());
}

void AugmentationConfig::validate() const {
  if (any_scramble() && distraction != Distraction::Three) {
    throw std::invalid_argument("scrambling augmentations require distraction = 3");
  }
}

void to_json(Json& j, const AugmentationConfig& c) {
  j = Json{{"distraction", distraction_json(c.distraction)},
           {"scramble_tool_name", c.scramble_tool_name},
           {"scramble_tool_description", c.scramble_tool_description},
           {"scramble_arg_descriptions", c.scramble_arg_descriptions},
           {"scramble_arg_types", c.scramble_arg_types},
           {"seed", c.seed}};
}

void from_json(const Json& j, AugmentationConfig& c) {
  c = AugmentationConfig{};
  if (auto it = j.find("distraction"); it != j.end()) c.distraction = parse_distraction(*it);
  c.scramble_tool_name = j.value("scramble_tool_name", false);
  c.scramble_tool_description = j.value("scramble_tool_description", false);
  c.scramble_arg_descriptions = j.value("scramble_arg_descriptions", false);
  c.scramble_arg_types = j.value("scramble_arg_types", false);
  c.seed = j.value("seed", std::uint64_t{0});
}

std::vector<Json> PresentedToolset::rendered() const {
  std::vector<Json> out;
  out.reserve(schemas.size());
  for (const auto& s : schemas) out.push_back(render_schema(s, !types_hidden));
  return out;
}

std::optional<std::string> PresentedToolset::original_name(std::string_view presented) const {
  auto it = reverse_map.find(std::string(presented));
  if (it == reverse_map.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> PresentedToolset::presented_name(std::string_view original) const {
  auto it = name_map.find(std::string(original));
  if (it == name_map.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> tool_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::pair<std::size_t, std::size_t> token_jaccard(std::string_view a, std::string_view b) {
  return jaccard(token_set(a), token_set(b));
}

std::vector<ToolSchema> rank_distraction_tools(std::span<const ToolSchema> necessary, std::span<const ToolSchema> pool) {
  std::set<std::string> domains;
  std::set<std::string> necessary_tokens;
  std::set<std::string> necessary_names;
  for (const auto& tool : necessary) {
    domains.insert(tool.domain);
    necessary_names.insert(tool.name);
    auto tokens = token_set(signature_text(tool));
    necessary_tokens.insert(tokens.begin(), tokens.end());
  }

  struct Ranked {
    const ToolSchema* schema;
    bool shares_domain;
    std::pair<std::size_t, std::size_t> similarity;
  };
  std::vector<Ranked> ranked;
  for (const auto& tool : pool) {
    if (necessary_names.count(tool.name)) {
      throw std::invalid_argument("distraction pool contains necessary tool '" + tool.name + "'");
    }
    ranked.push_back({&tool, domains.count(tool.domain) > 0, jaccard(token_set(signature_text(tool)), necessary_tokens)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.shares_domain != b.shares_domain) return a.shares_domain;
    if (fraction_greater(a.similarity, b.similarity)) return true;
    if (fraction_greater(b.similarity, a.similarity)) return false;
    return a.schema->name < b.schema->name;
  });
  std::vector<ToolSchema> out;
  out.reserve(ranked.size());
  for (const auto& r : ranked) out.push_back(*r.schema);
  return out;
}

PresentedToolset apply_augmentations(std::span<const ToolSchema> necessary, std::span<const ToolSchema> pool,
                                     const AugmentationConfig& config) {
  std::vector<ToolSchema> presented(necessary.begin(), necessary.end());
  if (config.distraction != Distraction::Zero) {
    auto ranked = rank_distraction_tools(necessary, pool);
    std::size_t count = ranked.size();
    if (config.distraction == Distraction::Three) count = std::min<std::size_t>(3, count);
    if (config.distraction == Distraction::Ten) count = std::min<std::size_t>(10, count);
    presented.insert(presented.end(), ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(count));

    // Distractions would otherwise always trail the necessary tools.
    SplitMix64 rng(config.seed);
    for (std::size_t i = presented.size(); i > 1; --i) {
      std::swap(presented[i - 1], presented[rng.below(i)]);
    }
  }

  PresentedToolset out;
  out.types_hidden = config.scramble_arg_types;

  std::map<std::string, std::vector<std::string>> by_domain;
  for (const auto& tool : presented) by_domain[tool.domain].push_back(tool.name);
  for (auto& [domain, names] : by_domain) std::sort(names.begin(), names.end());

  for (auto tool : presented) {
    std::string shown = tool.name;
    if (config.scramble_tool_name) {
      const auto& names = by_domain[tool.domain];
      const auto k = std::lower_bound(names.begin(), names.end(), tool.name) - names.begin();
      shown = tool.domain + "_" + std::to_string(k);
    }
    if (!out.reverse_map.emplace(shown, tool.name).second) {
      throw std::invalid_argument("presented tool name collision on '" + shown + "'");
    }
    out.name_map.emplace(tool.name, shown);
    tool.name = shown;
    if (config.scramble_tool_description) tool.description.clear();
    if (config.scramble_arg_descriptions) {
      for (auto& arg : tool.args) arg.description.clear();
    }
    out.schemas.push_back(std::move(tool));
  }
  return out;
}

}  // namespace toolsim
