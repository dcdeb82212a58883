#include "haantjes/scenarios.hpp"

#include <utility>

namespace haantjes {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& packaged_scenario_texts();
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : detail::packaged_scenario_texts()) names.emplace_back(name);
  return names;
}

std::optional<std::string_view> scenario_text(std::string_view name) {
  for (const auto& [n, text] : detail::packaged_scenario_texts()) {
    if (n == name) return text;
  }
  return std::nullopt;
}

}  // namespace haantjes
