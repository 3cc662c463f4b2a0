#pragma once

#include <cstddef>
#include <vector>

#include "ffst/core/wavefunction.hpp"
#include "ffst/harness/report.hpp"
#include "ffst/harness/scenario.hpp"

namespace ffst::harness {

/// Field snapshots at each checkpoint, for plotting.
struct FieldDumps {
  std::vector<double> x;
  std::vector<std::vector<double>> density;    ///< |psi|^2 of the driven state
  std::vector<std::vector<double>> potential;  ///< driving potential
};

struct RunResult {
  Report report;
  FieldDumps fields;
};

/// Speed-controlled run:
///  1. propagate the reference over [0, T] and record it;
///  2. build the driving potential from the record and the alpha schedule;
///  3. propagate a fresh copy of the initial fast-forward state under it;
///  4. compare each checkpoint with the expected state at Lambda(t_k);
///  5. compare the final state with the reference end state (exact-target
///     schedules), using the closed form when one exists.
/// Module errors are caught and recorded as a numerical failure.
RunResult run_speed_control(const Scenario& s);

/// Shortcut run (transport, compression or numeric phase): builds the drive,
/// propagates the initial eigenstate, and compares with the target eigenstate.
RunResult run_sta(const Scenario& s);

/// Dispatches on the branch, then runs the convergence ladder when present.
RunResult run_scenario(const Scenario& s);

/// Compares f / (dR/dt) of two sta-phase-ode scenarios at shared R values
/// (a quarter, half and three quarters of the way from R_i to R_f). Both must
/// use the same family and endpoints; throws ScenarioError otherwise.
Report verify_scaling_property(const Scenario& a, const Scenario& b);

/// Reruns the scenario for each (n_points, dt) rung and reports the distance
/// of the final state from its target, plus the empirical order over rungs
/// that refine dt.
ConvergenceRecord convergence_study(const Scenario& s, const std::vector<LadderRung>& ladder);

/// Runs independent scenarios on up to `threads` worker threads. Results are
/// returned in input order.
std::vector<RunResult> run_batch(const std::vector<Scenario>& scenarios, std::size_t threads);

}  // namespace ffst::harness
