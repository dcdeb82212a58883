#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace haantjes {

/// Names of the manifests compiled into the library, sorted.
std::vector<std::string> scenario_names();

/// Manifest text of a packaged scenario.
std::optional<std::string_view> scenario_text(std::string_view name);

}  // namespace haantjes
