#include "ffst/io/commands.hpp"

#include <cstdlib>

#include <fmt/ostream.h>

#include "ffst/harness/runner.hpp"
#include "ffst/io/builtin.hpp"
#include "ffst/io/csv.hpp"
#include "ffst/io/scenario_json.hpp"

namespace ffst::io {
namespace {

constexpr std::string_view kBuiltinPrefix = "builtin:";

nlohmann::json load_document(const std::string& source) {
  if (source.starts_with(kBuiltinPrefix)) {
    const auto name = std::string_view(source).substr(kBuiltinPrefix.size());
    const auto builtin = find_builtin(name);
    if (!builtin)
      throw harness::ScenarioError("<file>", fmt::format("no bundled scenario named \"{}\"", name));
    return nlohmann::json::parse(builtin->text);
  }
  return read_json_file(source);
}

}  // namespace

harness::Scenario load_scenario(const std::string& source, const std::vector<std::string>& overrides) {
  auto doc = load_document(source);
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_scenario(doc);
}

std::filesystem::path resolve_out_dir(const std::optional<std::filesystem::path>& explicit_dir,
                                      const std::string& scenario_name) {
  if (explicit_dir) return *explicit_dir;
  if (const char* env = std::getenv("FFST_OUT_DIR"); env && *env) return env;
  return std::filesystem::path("ffst-out") / scenario_name;
}

int cmd_run(const std::string& source, const std::optional<std::filesystem::path>& out_dir,
            const std::vector<std::string>& overrides, std::ostream& out, std::ostream& err) {
  harness::RunResult result;
  try {
    result = harness::run_scenario(load_scenario(source, overrides));
  } catch (const harness::ScenarioError& e) {
    fmt::print(err, "schema error: {}\n", e.what());
    return kSchemaError;
  }
  const auto dir = resolve_out_dir(out_dir, result.report.scenario);
  try {
    write_run_outputs(dir, result);
  } catch (const std::exception& e) {
    fmt::print(err, "cannot write results to {}: {}\n", dir.string(), e.what());
    return kNumericalFailure;
  }
  const auto& r = result.report;
  fmt::print(out, "{}: {} ({:.1f} s), results in {}\n", r.scenario, to_string(r.status),
             r.wall_clock_seconds, dir.string());
  for (const auto& t : r.targets)
    fmt::print(out, "  {:<24} {:>14.8g}  {} {:<14.10g} {}\n", t.name, t.value, t.kind, t.limit,
               t.passed ? "ok" : "FAILED");
  if (!r.diagnostic.empty()) fmt::print(err, "{}\n", r.diagnostic);
  switch (r.status) {
    case harness::RunStatus::passed: return kPass;
    case harness::RunStatus::threshold_failed: return kThresholdFailure;
    case harness::RunStatus::numerical_error: return kNumericalFailure;
  }
  return kNumericalFailure;
}

int cmd_validate(const std::string& source, std::ostream& out, std::ostream& err) {
  try {
    const auto s = load_scenario(source);
    fmt::print(out, "{}: valid {} scenario\n", s.name, to_string(s.branch));
    return kPass;
  } catch (const harness::ScenarioError& e) {
    fmt::print(err, "schema error: {}\n", e.what());
    return kSchemaError;
  }
}

int cmd_list_builtin(std::ostream& out) {
  for (const auto& b : builtin_scenarios()) {
    const auto doc = nlohmann::json::parse(b.text);
    fmt::print(out, "{:<28} {}\n", b.name, doc.value("description", ""));
  }
  return kPass;
}

}  // namespace ffst::io
