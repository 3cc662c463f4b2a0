#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace ffst::io {

/// A scenario file compiled into the library.
struct BuiltinScenario {
  std::string_view name;  ///< file stem
  std::string_view text;  ///< JSON document
};

std::span<const BuiltinScenario> builtin_scenarios();
std::optional<BuiltinScenario> find_builtin(std::string_view name);

}  // namespace ffst::io
