#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace toolsim {

/// Data files compiled into the library (fixtures/, prompts/), keyed by their
/// path relative to the repository root, e.g. "fixtures/locations.json".
std::optional<std::string_view> embedded_asset(std::string_view name);
std::vector<std::string_view> embedded_asset_names();

}  // namespace toolsim
