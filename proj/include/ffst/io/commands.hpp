#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ffst/harness/scenario.hpp"

namespace ffst::io {

enum ExitCode : int { kPass = 0, kThresholdFailure = 1, kSchemaError = 2, kNumericalFailure = 3 };

/// Loads a scenario from a file path, or from the bundled set when the
/// source is written "builtin:<name>". Overrides are applied to the document
/// before it is parsed.
harness::Scenario load_scenario(const std::string& source,
                                const std::vector<std::string>& overrides = {});

/// Output directory: the explicit one, else $FFST_OUT_DIR, else
/// ./ffst-out/<scenario name>.
std::filesystem::path resolve_out_dir(const std::optional<std::filesystem::path>& explicit_dir,
                                      const std::string& scenario_name);

int cmd_run(const std::string& source, const std::optional<std::filesystem::path>& out_dir,
            const std::vector<std::string>& overrides, std::ostream& out, std::ostream& err);
int cmd_validate(const std::string& source, std::ostream& out, std::ostream& err);
int cmd_list_builtin(std::ostream& out);

}  // namespace ffst::io
