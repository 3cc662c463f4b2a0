#include "ffst/harness/scenario.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace ffst::harness {
namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view name, const std::pair<Enum, std::string_view> (&table)[N]) {
  for (const auto& [value, label] : table)
    if (label == name) return value;
  return std::nullopt;
}

template <typename Enum, std::size_t N>
std::string_view label(Enum value, const std::pair<Enum, std::string_view> (&table)[N]) {
  for (const auto& [v, l] : table)
    if (v == value) return l;
  return "?";
}

constexpr std::pair<Branch, std::string_view> kBranches[] = {
    {Branch::speed_control, "speed-control"},
    {Branch::sta_transport, "sta-transport"},
    {Branch::sta_compression, "sta-compression"},
    {Branch::sta_phase_ode, "sta-phase-ode"}};

constexpr std::pair<PotentialKind, std::string_view> kPotentials[] = {
    {PotentialKind::free, "free"},
    {PotentialKind::harmonic, "harmonic"},
    {PotentialKind::anharmonic, "anharmonic"},
    {PotentialKind::box, "box"}};

constexpr std::pair<FamilyKind, std::string_view> kFamilies[] = {
    {FamilyKind::translation, "translation"}, {FamilyKind::compression, "compression"}};

void require(bool ok, const char* key, const std::string& message) {
  if (!ok) throw ScenarioError(key, message);
}

void require_positive(double v, const char* key) {
  require(std::isfinite(v) && v > 0.0, key, fmt::format("must be positive, got {}", v));
}

void require_fraction(std::optional<double> v, const char* key) {
  if (v) require(*v >= 0.0 && *v <= 1.0, key, fmt::format("must lie in [0, 1], got {}", *v));
}

void require_positive(std::optional<double> v, const char* key) {
  if (v) require_positive(*v, key);
}

void validate_grid(std::size_t n, double x_min, double x_max, const char* key) {
  require(n >= 16 && (n & (n - 1)) == 0, key,
          fmt::format("must be a power of two >= 16, got {}", n));
  require(std::isfinite(x_min) && std::isfinite(x_max) && x_max > x_min, "grid.x_max",
          "must exceed grid.x_min");
}

}  // namespace

std::string_view to_string(Branch b) { return label(b, kBranches); }
std::optional<Branch> parse_branch(std::string_view name) { return lookup(name, kBranches); }
std::string_view to_string(PotentialKind k) { return label(k, kPotentials); }
std::optional<PotentialKind> parse_potential_kind(std::string_view name) {
  return lookup(name, kPotentials);
}
std::string_view to_string(FamilyKind k) { return label(k, kFamilies); }
std::optional<FamilyKind> parse_family_kind(std::string_view name) {
  return lookup(name, kFamilies);
}

speed::AlphaSchedule build_alpha_schedule(const Scenario& s) {
  if (!s.alpha) throw ScenarioError("schedule", "speed-control needs an alpha schedule");
  const AlphaSpec& a = *s.alpha;
  speed::AlphaParams p;
  p.duration = a.duration;
  p.value = a.value;
  p.ramp_fraction = a.ramp_fraction;
  p.window = a.window;
  p.sample_times = a.sample_times;
  p.sample_values = a.sample_values;
  p.interpolation = a.interpolation;
  if (a.exact_target) p.reference_duration = a.reference_duration;
  return speed::make_alpha_schedule(a.kind, p);
}

sta::RSchedule build_r_schedule(const Scenario& s) {
  if (!s.r) throw ScenarioError("schedule", "shortcut branches need an R schedule");
  const RSpec& r = *s.r;
  if (r.kind == sta::RKind::quintic) return sta::RSchedule::quintic(r.r_initial, r.r_final, r.duration);
  return sta::RSchedule::custom_samples(r.sample_times, r.sample_values, r.sample_velocities);
}

double controlled_duration(const Scenario& s) {
  if (s.branch == Branch::speed_control) return build_alpha_schedule(s).duration();
  return build_r_schedule(s).duration();
}

std::vector<double> checkpoint_times(const Scenario& s) {
  if (!s.checkpoints.empty()) return s.checkpoints;
  const double tf = controlled_duration(s);
  std::vector<double> out(11);
  for (int k = 0; k <= 10; ++k) out[static_cast<std::size_t>(k)] = k == 10 ? tf : tf * k / 10.0;
  return out;
}

void validate_scenario(const Scenario& s) {
  require(!s.name.empty(), "name", "must not be empty");
  validate_grid(s.grid.n_points, s.grid.x_min, s.grid.x_max, "grid.n_points");
  require_positive(s.constants.hbar, "constants.hbar");
  require_positive(s.constants.mass, "constants.mass");

  const auto& init = s.initial_state;
  if (init.kind == InitialKind::gaussian) {
    require(!is_sta(s.branch), "initial_state.kind",
            "shortcut branches start from an eigenstate");
    require_positive(init.sigma, "initial_state.sigma");
    require(std::isfinite(init.x0) && std::isfinite(init.k0), "initial_state.x0",
            "position and wavenumber must be finite");
    require(init.x0 - 5.0 * init.sigma > s.grid.x_min && init.x0 + 5.0 * init.sigma < s.grid.x_max,
            "initial_state.x0", "packet support x0 +- 5 sigma must lie inside the grid");
  } else {
    require(init.index >= 0, "initial_state.index", "must be >= 0");
  }

  const auto& pot = s.potential;
  if (pot.kind == PotentialKind::harmonic || pot.kind == PotentialKind::anharmonic)
    require_positive(pot.omega, "potential.omega");
  if (pot.kind == PotentialKind::anharmonic)
    require(pot.quartic >= 0.0, "potential.quartic", "must be >= 0");
  if (pot.kind == PotentialKind::box) {
    require_positive(pot.half_width, "potential.half_width");
    require_positive(pot.depth, "potential.depth");
    require_positive(pot.wall_width, "potential.wall_width");
  }
  require(std::isfinite(pot.center) && std::isfinite(pot.drive_amplitude) &&
              std::isfinite(pot.drive_frequency),
          "potential.center", "must be finite");
  if (is_sta(s.branch))
    require(pot.drive_amplitude == 0.0, "potential.drive_amplitude",
            "shortcut branches take a static potential shape");
  if (s.branch == Branch::sta_phase_ode)
    require(pot.family.has_value(), "potential.family",
            "sta-phase-ode needs a family (translation or compression)");
  else
    require(!pot.family.has_value(), "potential.family", "only used by sta-phase-ode");
  if (is_sta(s.branch))
    require(pot.kind != PotentialKind::free, "potential.kind",
            "shortcut branches need a confining potential");

  if (s.branch == Branch::speed_control) {
    require(s.alpha.has_value() && !s.r.has_value(), "schedule",
            "speed-control takes an alpha schedule");
    require_positive(s.alpha->reference_duration, "schedule.reference_duration");
    require_positive(s.alpha->duration, "schedule.duration");
    try {
      (void)build_alpha_schedule(s);
    } catch (const ScenarioError&) {
      throw;
    } catch (const InvalidArgument& e) {
      throw ScenarioError("schedule", e.what());
    }
  } else {
    require(s.r.has_value() && !s.alpha.has_value(), "schedule",
            "shortcut branches take an R schedule");
    try {
      const auto r = build_r_schedule(s);
      const bool squeezes = s.branch == Branch::sta_compression ||
                            (s.branch == Branch::sta_phase_ode && pot.family == FamilyKind::compression);
      if (squeezes && !(r.r_min() > 0.0))
        throw ScenarioError("schedule.r_initial", "compression needs R > 0 throughout");
    } catch (const ScenarioError&) {
      throw;
    } catch (const InvalidArgument& e) {
      throw ScenarioError("schedule", e.what());
    }
  }

  const auto& num = s.numerics;
  require_positive(num.dt, "numerics.dt");
  require_positive(num.dt_ref, "numerics.dt_ref");
  if (num.node_threshold)
    require(*num.node_threshold > 0.0 && *num.node_threshold < 1.0, "numerics.node_threshold",
            "must lie in (0, 1)");
  require(num.drive_step_fraction > 0.0 && num.drive_step_fraction <= 0.25,
          "numerics.drive_step_fraction", "must lie in (0, 0.25]");
  require_positive(num.family_step, "numerics.family_step");
  if (num.scaling_partner_duration) {
    require(s.branch == Branch::sta_phase_ode, "numerics.scaling_partner_duration",
            "only used by sta-phase-ode");
    require_positive(num.scaling_partner_duration, "numerics.scaling_partner_duration");
  }
  for (const auto& rung : num.convergence_ladder) {
    validate_grid(rung.n_points, s.grid.x_min, s.grid.x_max, "numerics.convergence_ladder.n_points");
    require_positive(rung.dt, "numerics.convergence_ladder.dt");
  }

  const double tf = controlled_duration(s);
  for (std::size_t k = 0; k < s.checkpoints.size(); ++k) {
    const double t = s.checkpoints[k];
    require(t >= 0.0 && t <= tf, "checkpoints",
            fmt::format("time {} is outside [0, T_F = {}]", t, tf));
    if (k > 0) require(t > s.checkpoints[k - 1], "checkpoints", "must be strictly increasing");
  }

  const auto& th = s.thresholds;
  require_fraction(th.final_fidelity_min, "thresholds.final_fidelity_min");
  require_fraction(th.final_fidelity_max, "thresholds.final_fidelity_max");
  require_fraction(th.reversal_fidelity_min, "thresholds.reversal_fidelity_min");
  require_fraction(th.reference_fidelity_min, "thresholds.reference_fidelity_min");
  if (th.reference_fidelity_min)
    require(s.branch == Branch::speed_control, "thresholds.reference_fidelity_min",
            "only meaningful for speed-control");
  require_positive(th.density_l2_max, "thresholds.density_l2_max");
  require_positive(th.norm_dev_max, "thresholds.norm_dev_max");
  require_positive(th.pause_drift_max, "thresholds.pause_drift_max");
  require_positive(th.phase_oracle_max, "thresholds.phase_oracle_max");
  require_positive(th.scaling_deviation_max, "thresholds.scaling_deviation_max");
  require_positive(th.convergence_order_min, "thresholds.convergence_order_min");
  require_positive(th.convergence_ratio_min, "thresholds.convergence_ratio_min");
  if (th.pause_drift_max)
    require(s.alpha && s.alpha->kind == speed::AlphaKind::pause_window, "thresholds.pause_drift_max",
            "needs a pause-window schedule");
  if (th.reversal_fidelity_min)
    require(s.alpha && s.alpha->kind == speed::AlphaKind::reverse_window,
            "thresholds.reversal_fidelity_min", "needs a reverse-window schedule");
  if (th.phase_oracle_max)
    require(s.branch == Branch::sta_phase_ode, "thresholds.phase_oracle_max",
            "only meaningful for sta-phase-ode");
  if (th.scaling_deviation_max)
    require(num.scaling_partner_duration.has_value(), "thresholds.scaling_deviation_max",
            "needs numerics.scaling_partner_duration");
  if (th.convergence_order_min || th.convergence_ratio_min)
    require(num.convergence_ladder.size() >= 2, "numerics.convergence_ladder",
            "order and ratio limits need at least two rungs");
}

}  // namespace ffst::harness
