#include "ffst/harness/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

#include <fmt/core.h>

#include "ffst/core/eigensolver.hpp"
#include "ffst/core/spectral.hpp"
#include "ffst/harness/model.hpp"
#include "ffst/speed/ff_drive.hpp"
#include "ffst/sta/analytic.hpp"
#include "ffst/sta/sta_drive.hpp"

namespace ffst::harness {
namespace {

constexpr double kBoundaryDensityLimit = 1e-10;
constexpr double kSpeedNodeThreshold = 1e-6;  // amplitude fraction
constexpr double kStaNodeThreshold = 1e-10;   // density fraction

struct Outcome {
  Report report;
  FieldDumps fields;
  std::optional<WaveFunction> final_state;
  std::optional<WaveFunction> target_state;
};

// Checkpoint times merged with extra probe times; returns the sorted union.
std::vector<double> merge_times(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

std::size_t index_of(const std::vector<double>& times, double t) {
  return static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), t) - times.begin());
}

void echo_common(Report& r, const Scenario& s) {
  r.scenario = s.name;
  r.branch = std::string(to_string(s.branch));
  r.parameters["n_points"] = static_cast<double>(s.grid.n_points);
  r.parameters["x_min"] = s.grid.x_min;
  r.parameters["x_max"] = s.grid.x_max;
  r.parameters["hbar"] = s.constants.hbar;
  r.parameters["mass"] = s.constants.mass;
  r.parameters["dt"] = s.numerics.dt;
}

CheckpointRecord make_record(double t, double coordinate, const WaveFunction& psi,
                             const WaveFunction& expected, const PotentialField& v,
                             const PhysicalConstants& c) {
  CheckpointRecord rec;
  rec.time = t;
  rec.lambda_or_r = coordinate;
  rec.fidelity = fidelity(psi, expected);
  rec.density_l2_error = density_l2_error(psi, expected);
  rec.norm_dev = std::abs(psi.norm_squared() - 1.0);
  rec.energy = expectation_energy(psi, v, c);
  rec.max_abs_vff = v.max_abs();
  return rec;
}

void dump_fields(FieldDumps& d, const WaveFunction& psi, const PotentialField& v) {
  if (d.x.empty()) {
    const auto xs = psi.grid().positions();
    d.x.assign(xs.begin(), xs.end());
  }
  d.density.push_back(psi.density());
  d.potential.emplace_back(v.values().begin(), v.values().end());
}

void summarize_checkpoints(Report& r, double max_norm_dev) {
  double worst_density = 0.0, worst_v = 0.0;
  for (const auto& c : r.checkpoints) {
    worst_density = std::max(worst_density, c.density_l2_error);
    worst_v = std::max(worst_v, c.max_abs_vff);
    max_norm_dev = std::max(max_norm_dev, c.norm_dev);
  }
  r.metrics["max_density_l2_error"] = worst_density;
  r.metrics["max_norm_dev"] = max_norm_dev;
  r.metrics["max_abs_vff"] = worst_v;
}

void common_targets(Report& r, const Thresholds& th) {
  add_target(r, "norm_dev", r.metrics.at("max_norm_dev"), th.norm_dev_max, false);
  if (th.final_fidelity_min) add_target(r, "final_fidelity", r.metrics.at("final_fidelity"), *th.final_fidelity_min, true);
  if (th.final_fidelity_max) add_target(r, "final_fidelity", r.metrics.at("final_fidelity"), *th.final_fidelity_max, false);
  if (th.density_l2_max) add_target(r, "density_l2_error", r.metrics.at("max_density_l2_error"), *th.density_l2_max, false);
}

StepObserver norm_tracker(double& worst) {
  return [&worst](double, const WaveFunction& psi) {
    worst = std::max(worst, std::abs(psi.norm_squared() - 1.0));
  };
}

// ---------------------------------------------------------------- speed control

Outcome execute_speed_control(const Scenario& s) {
  Outcome out;
  Report& r = out.report;
  echo_common(r, s);
  const Grid grid = scenario_grid(s);
  const auto& c = s.constants;
  const auto schedule = build_alpha_schedule(s);
  const double reference_duration = s.alpha->reference_duration;
  const double tf = schedule.duration();

  speed::ReferenceOptions opt;
  opt.dt = s.numerics.dt;
  opt.sample_interval = s.numerics.dt_ref.value_or(s.numerics.dt);
  opt.node_fraction = s.numerics.node_threshold.value_or(kSpeedNodeThreshold);
  opt.boundary_density_limit = kBoundaryDensityLimit;
  r.parameters["dt_ref"] = opt.sample_interval;
  r.parameters["node_threshold"] = opt.node_fraction;
  r.parameters["reference_duration"] = reference_duration;
  r.parameters["controlled_duration"] = tf;

  const auto reference = speed::ReferenceTrajectory::record(
      initial_state(s, grid), reference_potential(s, grid), reference_duration, c, opt);
  const speed::SpeedControlDrive drive(reference, schedule);

  // Extra landing times for the window diagnostics.
  std::vector<double> probes;
  const auto& window = schedule.window();
  if (window && schedule.kind() == speed::AlphaKind::pause_window) {
    for (int k = 0; k <= 10; ++k)
      probes.push_back(window->plateau_start() + (window->plateau_end() - window->plateau_start()) * k / 10.0);
  } else if (window && schedule.kind() == speed::AlphaKind::reverse_window) {
    probes = {window->start, window->end};
  }
  const auto checkpoints = checkpoint_times(s);
  auto times = merge_times(checkpoints, probes);
  if (times.back() != tf) times.push_back(tf);

  double max_norm_dev = 0.0;
  PropagationOptions popt;
  popt.boundary_density_limit = kBoundaryDensityLimit;
  const auto states = propagate_to_times(drive.ff_wavefunction(0.0), drive.as_potential(), 0.0,
                                         times, s.numerics.dt, c, norm_tracker(max_norm_dev), popt);

  for (double t : checkpoints) {
    const WaveFunction& psi = states[index_of(times, t)];
    const auto v = drive.potential(t);
    r.checkpoints.push_back(make_record(t, schedule.lambda(t), psi, drive.ff_wavefunction(t), v, c));
    dump_fields(out.fields, psi, v);
  }
  summarize_checkpoints(r, max_norm_dev);

  const WaveFunction& final_state = states.back();
  const double final_lambda = schedule.final_lambda();
  const bool exact = schedule.returns_to_unity() &&
                     std::abs(final_lambda - reference_duration) <= 1e-9 * reference_duration;
  WaveFunction target = exact ? closed_form_reference(s, grid, reference_duration)
                                    .value_or(reference->state_at(reference_duration))
                              : drive.ff_wavefunction(tf);
  r.metrics["final_lambda"] = final_lambda;
  r.metrics["exact_target"] = exact ? 1.0 : 0.0;
  r.metrics["final_fidelity"] = fidelity(final_state, target);
  r.metrics["reference_fidelity"] =
      fidelity(final_state, drive.ff_wavefunction(tf));

  if (window && schedule.kind() == speed::AlphaKind::pause_window) {
    const WaveFunction& frozen = states[index_of(times, probes.front())];
    double drift = 0.0;
    for (double t : probes) drift = std::max(drift, density_l2_error(states[index_of(times, t)], frozen));
    r.metrics["pause_drift"] = drift;
  }
  if (window && schedule.kind() == speed::AlphaKind::reverse_window) {
    r.metrics["reversal_fidelity"] =
        fidelity(states[index_of(times, window->start)], states[index_of(times, window->end)]);
  }

  const auto& th = s.thresholds;
  common_targets(r, th);
  if (th.pause_drift_max) add_target(r, "pause_drift", r.metrics.at("pause_drift"), *th.pause_drift_max, false);
  if (th.reversal_fidelity_min)
    add_target(r, "reversal_fidelity", r.metrics.at("reversal_fidelity"), *th.reversal_fidelity_min, true);
  if (th.reference_fidelity_min)
    add_target(r, "reference_fidelity", r.metrics.at("reference_fidelity"), *th.reference_fidelity_min, true);

  out.final_state = final_state;
  out.target_state = std::move(target);
  return out;
}

// ---------------------------------------------------------------- shortcuts

WaveFunction eigenstate(const sta::PotentialBuilder& builder, double r, int index,
                        const PhysicalConstants& c) {
  auto states = solve_eigenstates(builder(r), index + 1, c);
  return std::move(states.back().state);
}

WaveFunction with_phase(const WaveFunction& phi, const std::vector<double>& f) {
  WaveFunction psi = phi;
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= std::polar(1.0, f[i]);
  return psi;
}

std::shared_ptr<const sta::EigenFamily> build_family(const Scenario& s, const Grid& grid,
                                                     double r_lo, double r_hi) {
  sta::FamilyOptions fo;
  fo.step = s.numerics.family_step;
  return sta::EigenFamily::build(family_builder(s, grid), r_lo, r_hi, s.initial_state.index, grid,
                                 s.constants, fo);
}

sta::StaOptions sta_options(const Scenario& s) {
  sta::StaOptions o;
  o.drive_step_fraction = s.numerics.drive_step_fraction;
  o.phase.node_threshold = s.numerics.node_threshold.value_or(kStaNodeThreshold);
  return o;
}

// Time at which a monotone schedule passes through R = target.
std::optional<double> time_at(const sta::RSchedule& sched, double target) {
  double lo = 0.0, hi = sched.duration();
  const double sign = sched.r_final() >= sched.r_initial() ? 1.0 : -1.0;
  if (sign * (sched.value(lo) - target) > 0.0 || sign * (sched.value(hi) - target) < 0.0)
    return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sign * (sched.value(mid) - target) < 0.0) lo = mid;
    else hi = mid;
  }
  return std::abs(sched.value(lo) - target) <= std::abs(sched.value(hi) - target) ? lo : hi;
}

double scaling_deviation(const std::shared_ptr<const sta::EigenFamily>& family,
                         const sta::RSchedule& a, const sta::RSchedule& b,
                         const sta::StaOptions& options) {
  const sta::StaDrive da(family, a, options), db(family, b, options);
  double worst = 0.0;
  int compared = 0;
  for (double frac : {0.25, 0.5, 0.75}) {
    const double target = a.r_initial() + frac * (a.r_final() - a.r_initial());
    const auto ta = time_at(a, target), tb = time_at(b, target);
    if (!ta || !tb) continue;
    const double va = a.velocity(*ta), vb = b.velocity(*tb);
    if (va == 0.0 || vb == 0.0) continue;
    const auto fa = da.phase(*ta), fb = db.phase(*tb);
    for (std::size_t i = 0; i < fa.phase.size(); ++i)
      if (fa.valid[i] && fb.valid[i])
        worst = std::max(worst, std::abs(fa.phase[i] / va - fb.phase[i] / vb));
    ++compared;
  }
  if (compared == 0)
    throw ScenarioError("schedule", "the two schedules share no R value with nonzero velocity");
  return worst;
}

// Largest deviation of the numeric phase from the closed form, over the valid
// region, with both aligned at the numeric anchor.
std::optional<double> phase_oracle_deviation(const Scenario& s, const sta::StaDrive& drive,
                                             const std::vector<double>& times) {
  const FamilyKind kind = family_kind(s);
  if (kind == FamilyKind::compression &&
      !(s.potential.kind == PotentialKind::harmonic && s.potential.center == 0.0))
    return std::nullopt;
  const auto aux = sta::AnalyticAux(kind == FamilyKind::translation ? sta::AnalyticKind::translation
                                                                    : sta::AnalyticKind::compression,
                                    drive.schedule(), drive.family().grid(), s.constants);
  double worst = 0.0;
  for (double t : times) {
    const auto num = drive.phase(t);
    const auto exact = aux.phase(t);
    const double shift = exact[num.anchor];
    for (std::size_t i = 0; i < exact.size(); ++i)
      if (num.valid[i]) worst = std::max(worst, std::abs(num.phase[i] - (exact[i] - shift)));
  }
  return worst;
}

Outcome execute_sta(const Scenario& s) {
  Outcome out;
  Report& r = out.report;
  echo_common(r, s);
  const Grid grid = scenario_grid(s);
  const auto& c = s.constants;
  const auto sched = build_r_schedule(s);
  const auto builder = family_builder(s, grid);
  const int n = s.initial_state.index;
  const bool omit = s.numerics.omit_auxiliary;
  r.parameters["r_initial"] = sched.r_initial();
  r.parameters["r_final"] = sched.r_final();
  r.parameters["controlled_duration"] = sched.duration();
  r.parameters["state_index"] = n;
  r.parameters["omit_auxiliary"] = omit ? 1.0 : 0.0;

  TimeDependentPotential potential;
  std::function<WaveFunction(double)> expected;
  std::function<PotentialField(double)> driving;
  std::shared_ptr<const sta::EigenFamily> family;
  std::optional<sta::StaDrive> drive;

  if (s.branch == Branch::sta_phase_ode) {
    family = build_family(s, grid, sched.r_min(), sched.r_max());
    const auto opts = sta_options(s);
    r.parameters["node_threshold"] = opts.phase.node_threshold;
    r.parameters["drive_step_fraction"] = opts.drive_step_fraction;
    r.parameters["family_step"] = family->step();
    drive.emplace(family, sched, opts);
    auto d = std::make_shared<const sta::StaDrive>(*drive);
    driving = [d, sched, builder, omit](double t) {
      return omit ? builder(sched.value(t)) : d->potential(t);
    };
    expected = [d](double t) { return d->ff_wavefunction(t); };
  } else {
    const auto kind = s.branch == Branch::sta_transport ? sta::AnalyticKind::translation
                                                        : sta::AnalyticKind::compression;
    auto aux = std::make_shared<const sta::AnalyticAux>(kind, sched, grid, c);
    driving = [aux, sched, builder, omit](double t) {
      PotentialField v = builder(sched.value(t));
      if (!omit) {
        const auto dv = aux->delta_v(t);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += dv[i];
      }
      return v;
    };
    expected = [aux, sched, builder, n, c](double t) {
      return with_phase(eigenstate(builder, sched.value(t), n, c), aux->phase(t));
    };
  }
  potential = driving;

  const auto checkpoints = checkpoint_times(s);
  auto times = checkpoints;
  if (times.back() != sched.duration()) times.push_back(sched.duration());
  double max_norm_dev = 0.0;
  PropagationOptions popt;
  popt.boundary_density_limit = kBoundaryDensityLimit;
  const WaveFunction start = eigenstate(builder, sched.r_initial(), n, c);
  const auto states = propagate_to_times(start, potential, 0.0, times, s.numerics.dt, c,
                                         norm_tracker(max_norm_dev), popt);

  for (double t : checkpoints) {
    const WaveFunction& psi = states[index_of(times, t)];
    const auto v = driving(t);
    r.checkpoints.push_back(make_record(t, sched.value(t), psi, expected(t), v, c));
    dump_fields(out.fields, psi, v);
  }
  summarize_checkpoints(r, max_norm_dev);

  WaveFunction target = eigenstate(builder, sched.r_final(), n, c);
  r.metrics["final_fidelity"] = fidelity(states.back(), target);

  const auto& th = s.thresholds;
  if (drive) {
    std::vector<double> inner;
    for (double t : checkpoints)
      if (sched.velocity(t) != 0.0) inner.push_back(t);
    if (const auto dev = phase_oracle_deviation(s, *drive, inner)) r.metrics["phase_oracle_deviation"] = *dev;
    if (s.numerics.scaling_partner_duration) {
      if (s.r->kind != sta::RKind::quintic)
        throw ScenarioError("numerics.scaling_partner_duration", "needs a quintic schedule");
      const auto partner =
          sta::RSchedule::quintic(sched.r_initial(), sched.r_final(), *s.numerics.scaling_partner_duration);
      r.metrics["scaling_deviation"] = scaling_deviation(family, sched, partner, sta_options(s));
      r.parameters["scaling_partner_duration"] = *s.numerics.scaling_partner_duration;
    }
  }

  common_targets(r, th);
  if (th.phase_oracle_max) {
    const auto it = r.metrics.find("phase_oracle_deviation");
    if (it == r.metrics.end())
      throw ScenarioError("thresholds.phase_oracle_max", "no closed-form phase for this family");
    add_target(r, "phase_oracle_deviation", it->second, *th.phase_oracle_max, false);
  }
  if (th.scaling_deviation_max)
    add_target(r, "scaling_deviation", r.metrics.at("scaling_deviation"), *th.scaling_deviation_max, false);

  out.final_state = states.back();
  out.target_state = std::move(target);
  return out;
}

Outcome execute(const Scenario& s) {
  return s.branch == Branch::speed_control ? execute_speed_control(s) : execute_sta(s);
}

void record_failure(Report& r, const Scenario& s, const std::exception& e) {
  r = Report{};
  echo_common(r, s);
  r.status = RunStatus::numerical_error;
  r.diagnostic = e.what();
}

RunResult guarded(const Scenario& s, bool with_ladder) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  try {
    validate_scenario(s);
    Outcome o = execute(s);
    result.report = std::move(o.report);
    result.fields = std::move(o.fields);
    if (with_ladder && !s.numerics.convergence_ladder.empty()) {
      auto conv = convergence_study(s, s.numerics.convergence_ladder);
      Report& r = result.report;
      if (conv.order) r.metrics["convergence_order"] = *conv.order;
      if (conv.min_ratio) r.metrics["convergence_min_ratio"] = *conv.min_ratio;
      r.metrics["convergence_monotone"] = conv.monotone ? 1.0 : 0.0;
      const auto& th = s.thresholds;
      if (th.convergence_order_min)
        add_target(r, "convergence_order", conv.order.value_or(0.0), *th.convergence_order_min, true);
      if (th.convergence_ratio_min)
        add_target(r, "convergence_min_ratio", conv.min_ratio.value_or(0.0), *th.convergence_ratio_min, true);
      r.convergence = std::move(conv);
    }
    finalize_status(result.report);
    if (!result.report.passed()) {
      std::string failed;
      for (const auto& t : result.report.targets)
        if (!t.passed) failed += fmt::format("{}{} = {:.6g} (limit {} {:.6g})", failed.empty() ? "" : "; ",
                                             t.name, t.value, t.kind, t.limit);
      result.report.diagnostic = "threshold failure: " + failed;
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    record_failure(result.report, s, e);
    result.fields = {};
  }
  result.report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

RunResult run_speed_control(const Scenario& s) {
  if (s.branch != Branch::speed_control)
    throw ScenarioError("branch", "run_speed_control needs the speed-control branch");
  return guarded(s, false);
}

RunResult run_sta(const Scenario& s) {
  if (!is_sta(s.branch)) throw ScenarioError("branch", "run_sta needs a shortcut branch");
  return guarded(s, false);
}

RunResult run_scenario(const Scenario& s) { return guarded(s, true); }

Report verify_scaling_property(const Scenario& a, const Scenario& b) {
  const auto start = std::chrono::steady_clock::now();
  validate_scenario(a);
  validate_scenario(b);
  if (a.branch != Branch::sta_phase_ode || b.branch != Branch::sta_phase_ode)
    throw ScenarioError("branch", "the scaling check compares two sta-phase-ode scenarios");
  if (!(a.grid == b.grid) || !(a.constants == b.constants) || !(a.potential == b.potential) ||
      a.initial_state.index != b.initial_state.index)
    throw ScenarioError("potential", "the scaling check needs one shared eigenstate family");
  const auto sa = build_r_schedule(a), sb = build_r_schedule(b);
  if (sa.r_initial() != sb.r_initial() || sa.r_final() != sb.r_final())
    throw ScenarioError("schedule.r_final", fmt::format(
        "schedules must share endpoints, got [{}, {}] and [{}, {}]", sa.r_initial(),
        sa.r_final(), sb.r_initial(), sb.r_final()));
  if (std::max(sa.r_min(), sb.r_min()) > std::min(sa.r_max(), sb.r_max()))
    throw ScenarioError("schedule", "the two schedules cover disjoint R ranges");

  Report r;
  echo_common(r, a);
  r.scenario = a.name + " vs " + b.name;
  try {
    const Grid grid = scenario_grid(a);
    const auto family = build_family(a, grid, std::min(sa.r_min(), sb.r_min()),
                                     std::max(sa.r_max(), sb.r_max()));
    r.metrics["scaling_deviation"] = scaling_deviation(family, sa, sb, sta_options(a));
    if (a.thresholds.scaling_deviation_max)
      add_target(r, "scaling_deviation", r.metrics.at("scaling_deviation"),
                 *a.thresholds.scaling_deviation_max, false);
    finalize_status(r);
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    r.status = RunStatus::numerical_error;
    r.diagnostic = e.what();
  }
  r.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ConvergenceRecord convergence_study(const Scenario& s, const std::vector<LadderRung>& ladder) {
  ConvergenceRecord rec;
  for (const auto& rung : ladder) {
    Scenario step = s;
    step.grid.n_points = rung.n_points;
    step.numerics.dt = rung.dt;
    step.numerics.convergence_ladder.clear();
    step.numerics.scaling_partner_duration.reset();
    step.thresholds = Thresholds{};
    validate_scenario(step);
    const Outcome o = execute(step);
    rec.rungs.push_back({rung.n_points, rung.dt, phase_aligned_distance(*o.final_state, *o.target_state)});
  }
  for (std::size_t k = 1; k < rec.rungs.size(); ++k) {
    const auto &a = rec.rungs[k - 1], &b = rec.rungs[k];
    if (!(b.error < a.error)) rec.monotone = false;
    const double ratio = a.error / b.error;
    rec.min_ratio = rec.min_ratio ? std::min(*rec.min_ratio, ratio) : ratio;
    if (a.dt != b.dt) {
      const double order = std::log(ratio) / std::log(a.dt / b.dt);
      rec.order = rec.order ? std::min(*rec.order, order) : order;
    }
  }
  return rec;
}

std::vector<RunResult> run_batch(const std::vector<Scenario>& scenarios, std::size_t threads) {
  std::vector<RunResult> results(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      try {
        results[i] = run_scenario(scenarios[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t count = std::max<std::size_t>(1, std::min(threads, scenarios.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace ffst::harness
