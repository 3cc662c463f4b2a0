#include "ffst/io/builtin.hpp"

#include <algorithm>

namespace ffst::io {

// Generated at configure time from the scenarios directory.
std::span<const BuiltinScenario> embedded_scenarios();

std::span<const BuiltinScenario> builtin_scenarios() { return embedded_scenarios(); }

std::optional<BuiltinScenario> find_builtin(std::string_view name) {
  const auto all = builtin_scenarios();
  const auto it = std::find_if(all.begin(), all.end(), [&](const auto& b) { return b.name == name; });
  if (it == all.end()) return std::nullopt;
  return *it;
}

}  // namespace ffst::io
