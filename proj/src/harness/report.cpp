#include "ffst/harness/report.hpp"

#include <algorithm>
#include <cmath>

namespace ffst::harness {

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::passed: return "passed";
    case RunStatus::threshold_failed: return "threshold_failed";
    case RunStatus::numerical_error: return "numerical_error";
  }
  return "?";
}

std::optional<RunStatus> parse_run_status(std::string_view name) {
  for (auto s : {RunStatus::passed, RunStatus::threshold_failed, RunStatus::numerical_error})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

bool same_results(const Report& a, const Report& b) {
  Report x = a, y = b;
  x.wall_clock_seconds = y.wall_clock_seconds = 0.0;
  return x == y;
}

void add_target(Report& r, std::string name, double value, double limit, bool is_minimum) {
  // NaN never passes.
  const bool ok = is_minimum ? value >= limit : value <= limit;
  r.targets.push_back({std::move(name), value, limit, is_minimum ? "min" : "max", ok});
}

void finalize_status(Report& r) {
  if (r.status == RunStatus::numerical_error) return;
  const bool all = std::all_of(r.targets.begin(), r.targets.end(),
                               [](const TargetCheck& t) { return t.passed; });
  r.status = all ? RunStatus::passed : RunStatus::threshold_failed;
}

}  // namespace ffst::harness
