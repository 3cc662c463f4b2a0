#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ffst::harness {

enum class RunStatus { passed, threshold_failed, numerical_error };
std::string_view to_string(RunStatus s);
std::optional<RunStatus> parse_run_status(std::string_view name);

struct CheckpointRecord {
  double time = 0.0;
  double lambda_or_r = 0.0;
  double fidelity = 0.0;          ///< against the expected fast-forward state
  double density_l2_error = 0.0;  ///< against the expected density
  double norm_dev = 0.0;          ///< |norm^2 - 1|
  double energy = 0.0;            ///< <H> with the driving potential
  double max_abs_vff = 0.0;
  bool operator==(const CheckpointRecord&) const = default;
};

/// One checked limit. kind is "min" (value >= limit) or "max" (value <= limit).
struct TargetCheck {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  std::string kind;
  bool passed = false;
  bool operator==(const TargetCheck&) const = default;
};

struct ConvergenceRung {
  std::size_t n_points = 0;
  double dt = 0.0;
  double error = 0.0;
  bool operator==(const ConvergenceRung&) const = default;
};

struct ConvergenceRecord {
  std::vector<ConvergenceRung> rungs;
  std::optional<double> order;      ///< smallest pairwise order over dt-refining pairs
  std::optional<double> min_ratio;  ///< smallest error ratio between neighbouring rungs
  bool monotone = true;
  bool operator==(const ConvergenceRecord&) const = default;
};

struct Report {
  std::string scenario;
  std::string branch;
  RunStatus status = RunStatus::passed;
  std::string diagnostic;
  std::vector<CheckpointRecord> checkpoints;
  std::map<std::string, double> metrics;
  std::vector<TargetCheck> targets;
  std::optional<ConvergenceRecord> convergence;
  std::map<std::string, double> parameters;  ///< numerical parameters echoed
  double wall_clock_seconds = 0.0;

  bool passed() const { return status == RunStatus::passed; }
  bool operator==(const Report&) const = default;
};

/// Equality ignoring wall-clock time, the one field that varies between
/// otherwise identical runs.
bool same_results(const Report& a, const Report& b);

/// Adds a target check to the report.
void add_target(Report& r, std::string name, double value, double limit, bool is_minimum);

/// Sets the status from the targets unless a numerical error was recorded.
void finalize_status(Report& r);

}  // namespace ffst::harness
