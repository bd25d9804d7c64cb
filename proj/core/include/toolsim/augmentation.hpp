#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toolsim/tool_schema.hpp"

namespace toolsim {

enum class Distraction { Zero, Three, Ten, All };

std::string_view to_string(Distraction d);
Distraction parse_distraction(const Json& j);  // 0, 3, 10 or "all"

struct AugmentationConfig {
  Distraction distraction = Distraction::Zero;
  bool scramble_tool_name = false;
  bool scramble_tool_description = false;
  bool scramble_arg_descriptions = false;
  bool scramble_arg_types = false;
  std::uint64_t seed = 0;

  bool any_scramble() const {
    return scramble_tool_name || scramble_tool_description || scramble_arg_descriptions || scramble_arg_types;
  }

  /// Scrambling is only ever combined with three distraction tools.
  /// Throws std::invalid_argument otherwise.
  void validate() const;

  friend bool operator==(const AugmentationConfig&, const AugmentationConfig&) = default;
};

void to_json(Json& j, const AugmentationConfig& c);
void from_json(const Json& j, AugmentationConfig& c);

/// The tool set as the agent sees it, plus the presented→original name mapping.
struct PresentedToolset {
  std::vector<ToolSchema> schemas;  // presented names, possibly blanked descriptions
  std::map<std::string, std::string> name_map;  // original -> presented
  std::map<std::string, std::string> reverse_map;  // presented -> original
  bool types_hidden = false;

  std::vector<Json> rendered() const;
  std::optional<std::string> original_name(std::string_view presented) const;
  std::optional<std::string> presented_name(std::string_view original) const;
  bool presents(std::string_view original) const { return name_map.count(std::string(original)) > 0; }
};

/// Orders `pool` for use as distraction tools: tools sharing a domain with any
/// necessary tool first, then by descending token Jaccard similarity of
/// name+description against the necessary tools, then by name.
std::vector<ToolSchema> rank_distraction_tools(std::span<const ToolSchema> necessary, std::span<const ToolSchema> pool);

/// Token-level Jaccard similarity as an exact fraction (numerator, denominator).
std::pair<std::size_t, std::size_t> token_jaccard(std::string_view a, std::string_view b);

/// Lowercased alphanumeric unigrams; underscores and punctuation separate tokens.
std::vector<std::string> tool_tokens(std::string_view text);

/// Builds the presented tool set: necessary tools plus ranked distractions drawn
/// from `pool` (which must not contain necessary tools), then applies the
/// scrambling flags uniformly. Pure function of its inputs.
PresentedToolset apply_augmentations(std::span<const ToolSchema> necessary, std::span<const ToolSchema> pool,
                                     const AugmentationConfig& config);

}  // namespace toolsim
