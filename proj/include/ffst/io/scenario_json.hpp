#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ffst/harness/scenario.hpp"

namespace ffst::io {

/// Maps a scenario document onto a Scenario. Strict: unknown keys, wrong
/// types and out-of-range integers raise harness::ScenarioError naming the
/// dotted key path. The result is also passed through validate_scenario.
harness::Scenario parse_scenario(const nlohmann::json& doc);

/// Inverse of parse_scenario; parse_scenario(scenario_to_json(s)) == s.
nlohmann::json scenario_to_json(const harness::Scenario& s);

/// Reads a JSON document; malformed JSON becomes a ScenarioError at key "<file>".
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Applies a "dotted.key=value" override. The value is read as JSON when it
/// parses (numbers, booleans, arrays, quoted strings) and as a bare string
/// otherwise. Missing intermediate objects are created.
void apply_override(nlohmann::json& doc, std::string_view assignment);

}  // namespace ffst::io
