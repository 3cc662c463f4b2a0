#include "ffst/core/propagator.hpp"

#include <cmath>

#include <fmt/core.h>

#include "ffst/core/errors.hpp"

namespace ffst {

SplitOperatorPropagator::SplitOperatorPropagator(Grid grid, PhysicalConstants constants)
    : grid_(std::move(grid)),
      constants_(constants),
      fft_(std::make_unique<FourierTransform>(grid_.size())),
      half_kinetic_(grid_.size()) {
  constants_.validate();
}

void SplitOperatorPropagator::prepare_kinetic(double dt) {
  if (dt == kinetic_dt_) return;
  const auto k = grid_.wavenumbers();
  const double c = constants_.hbar * dt / (4.0 * constants_.mass);
  for (std::size_t i = 0; i < k.size(); ++i) half_kinetic_[i] = std::polar(1.0, -c * k[i] * k[i]);
  kinetic_dt_ = dt;
}

void SplitOperatorPropagator::apply_kinetic(std::span<Complex> values) const {
  fft_->forward(values);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] *= half_kinetic_[i];
  fft_->inverse(values);
}

void SplitOperatorPropagator::step(WaveFunction& psi, const PotentialField& v_mid, double dt) {
  require_same_grid(psi.grid(), grid_, "propagator step");
  require_same_grid(v_mid.grid(), grid_, "propagator step potential");
  prepare_kinetic(dt);
  auto values = psi.values();
  apply_kinetic(values);
  const double c = dt / constants_.hbar;
  for (std::size_t i = 0; i < values.size(); ++i) values[i] *= std::polar(1.0, -c * v_mid[i]);
  apply_kinetic(values);
}

namespace {

std::size_t step_count(double span, double dt) {
  const double raw = span / dt;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw - 1e-9)));
}

void check_state(const WaveFunction& psi, double t, const PotentialField& v,
                 const PropagationOptions& options) {
  const double n2 = psi.norm_squared();
  if (!std::isfinite(n2))
    throw NumericalError(
        fmt::format("wavefunction became non-finite at t={:.6g} (max |V| = {:.6g})", t,
                    v.max_abs()));
  if (options.boundary_density_limit) {
    const double edge = std::max(std::norm(psi[0]), std::norm(psi[psi.size() - 1]));
    if (edge > *options.boundary_density_limit)
      throw NumericalError(fmt::format(
          "boundary density {:.3g} exceeds {:.3g} at t={:.6g}; enlarge the grid", edge,
          *options.boundary_density_limit, t));
  }
}

void run_segment(SplitOperatorPropagator& stepper, WaveFunction& psi,
                 const TimeDependentPotential& v, double t0, double t1, double dt,
                 const StepObserver& observe, const PropagationOptions& options) {
  const std::size_t n = step_count(t1 - t0, dt);
  const double h = (t1 - t0) / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t_mid = t0 + (static_cast<double>(j) + 0.5) * h;
    const PotentialField field = v(t_mid);
    stepper.step(psi, field, h);
    const double t_end = (j + 1 == n) ? t1 : t0 + static_cast<double>(j + 1) * h;
    check_state(psi, t_end, field, options);
    if (observe) observe(t_end, psi);
  }
}

void check_step(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InvalidArgument(fmt::format("time step must be positive, got {}", dt));
}

}  // namespace

WaveFunction propagate(WaveFunction psi, const TimeDependentPotential& v, double t0, double t1,
                       double dt, const PhysicalConstants& constants, const StepObserver& observe,
                       const PropagationOptions& options) {
  check_step(dt);
  if (!(t1 > t0)) throw InvalidArgument(fmt::format("propagate requires t1 > t0 ({} <= {})", t1, t0));
  SplitOperatorPropagator stepper(psi.grid(), constants);
  if (observe) observe(t0, psi);
  run_segment(stepper, psi, v, t0, t1, dt, observe, options);
  return psi;
}

std::vector<WaveFunction> propagate_to_times(const WaveFunction& psi0,
                                             const TimeDependentPotential& v, double t0,
                                             std::span<const double> times, double dt,
                                             const PhysicalConstants& constants,
                                             const StepObserver& observe,
                                             const PropagationOptions& options) {
  check_step(dt);
  SplitOperatorPropagator stepper(psi0.grid(), constants);
  WaveFunction psi = psi0;
  std::vector<WaveFunction> out;
  out.reserve(times.size());
  double t = t0;
  if (observe) observe(t0, psi);
  for (double target : times) {
    if (target < t) throw InvalidArgument("propagate_to_times: times must be increasing");
    if (target > t) run_segment(stepper, psi, v, t, target, dt, observe, options);
    t = target;
    out.push_back(psi);
  }
  return out;
}

}  // namespace ffst
