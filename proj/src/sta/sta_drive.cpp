#include "ffst/sta/sta_drive.hpp"

#include <cmath>

#include <fmt/core.h>

#include "ffst/core/errors.hpp"

namespace ffst::sta {

std::vector<double> complex_state_terms(std::span<const Complex> phi,
                                        std::span<const Complex> phi_x,
                                        std::span<const Complex> phi_r,
                                        std::span<const double> f_gradient, double r_rate,
                                        const PhysicalConstants& constants, double floor) {
  const std::size_t n = phi.size();
  if (phi_x.size() != n || phi_r.size() != n || f_gradient.size() != n)
    throw InvalidArgument("complex-state terms need inputs of equal length");
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::norm(phi[i]) <= floor || phi[i] == Complex{}) continue;
    out[i] = -constants.hbar * constants.hbar / constants.mass * f_gradient[i] *
                 (phi_x[i] / phi[i]).imag() -
             constants.hbar * r_rate * (phi_r[i] / phi[i]).imag();
  }
  return out;
}

void remove_uniform_part(std::span<double> delta, std::span<const double> density) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    num += density[i] * delta[i];
    den += density[i];
  }
  if (!(den > 0.0)) return;
  const double mean = num / den;
  for (double& d : delta) d -= mean;
}

StaDrive::StaDrive(std::shared_ptr<const EigenFamily> family, RSchedule schedule,
                   StaOptions options)
    : family_(std::move(family)), schedule_(std::move(schedule)), options_(options) {
  if (!family_) throw InvalidArgument("shortcut drive needs an eigenstate family");
  if (!(options_.drive_step_fraction > 0.0) || options_.drive_step_fraction > 0.25)
    throw InvalidArgument("drive_step_fraction must be in (0, 0.25]");
  const double tol = 1e-9 * std::max(1.0, family_->r_max() - family_->r_min());
  if (schedule_.r_min() < family_->r_min() - tol || schedule_.r_max() > family_->r_max() + tol)
    throw InvalidArgument(fmt::format(
        "schedule spans R in [{}, {}] but the family only covers [{}, {}]", schedule_.r_min(),
        schedule_.r_max(), family_->r_min(), family_->r_max()));
}

PhaseSolution StaDrive::phase(double t) const {
  return solve_phase_equation(*family_, schedule_.value(t), schedule_.velocity(t), options_.phase);
}

std::vector<double> StaDrive::phase_rate(double t, std::size_t anchor) const {
  const std::size_t n = family_->grid().size();
  // f depends on t through R and dR/dt only; both stand still where the
  // schedule has zero velocity and acceleration.
  if (schedule_.velocity(t) == 0.0 && schedule_.acceleration(t) == 0.0)
    return std::vector<double>(n, 0.0);
  const double tf = schedule_.duration();
  const double h = options_.drive_step_fraction * tf;
  auto f_at = [&](double s) {
    return solve_phase_equation(*family_, schedule_.value(s), schedule_.velocity(s),
                                options_.phase, anchor).phase;
  };
  // Fourth-order differences; one-sided stencils near the ends of [0, T_F].
  std::vector<double> rate(n);
  if (t - 2.0 * h >= 0.0 && t + 2.0 * h <= tf) {
    const auto fp2 = f_at(t + 2.0 * h), fp1 = f_at(t + h), fm1 = f_at(t - h), fm2 = f_at(t - 2.0 * h);
    for (std::size_t i = 0; i < n; ++i)
      rate[i] = (8.0 * (fp1[i] - fm1[i]) - (fp2[i] - fm2[i])) / (12.0 * h);
  } else {
    const double s = t - 2.0 * h < 0.0 ? h : -h;
    const auto f0 = f_at(t), f1 = f_at(t + s), f2 = f_at(t + 2.0 * s), f3 = f_at(t + 3.0 * s),
               f4 = f_at(t + 4.0 * s);
    for (std::size_t i = 0; i < n; ++i)
      rate[i] = (-25.0 * f0[i] + 48.0 * f1[i] - 36.0 * f2[i] + 16.0 * f3[i] - 3.0 * f4[i]) /
                (12.0 * s);
  }
  return rate;
}

StaSample StaDrive::evaluate(double t) const {
  const double r = schedule_.value(t);
  const double r_rate = schedule_.velocity(t);
  const auto phi = family_->state(r);
  const auto phi_r = family_->state_derivative(r);
  const auto& c = family_->constants();
  PhaseSolution sol =
      solve_phase_equation(family_->grid(), phi, phi_r, r_rate, c, options_.phase);
  const auto rate = phase_rate(t, sol.anchor);

  PotentialField v0 = family_->builder()(r);
  const std::size_t n = v0.size();
  std::vector<double> delta(n), density(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = sol.gradient[i];
    delta[i] = -0.5 * c.hbar * c.hbar / c.mass * g * g - c.hbar * rate[i];
    density[i] = phi[i] * phi[i];
  }
  remove_uniform_part(delta, density);
  std::vector<double> values(v0.values().begin(), v0.values().end());
  for (std::size_t i = 0; i < n; ++i) values[i] += delta[i];
  PotentialField v(v0.grid(), std::move(values));
  v.require_finite("shortcut driving potential");
  return StaSample{std::move(v), std::move(sol.phase), r, r_rate};
}

WaveFunction StaDrive::ff_wavefunction(double t) const {
  const double r = schedule_.value(t);
  const auto phi = family_->state(r);
  const auto f = phase(t).phase;
  WaveFunction psi(family_->grid());
  for (std::size_t i = 0; i < phi.size(); ++i) psi[i] = std::polar(1.0, f[i]) * phi[i];
  psi.normalize();
  return psi;
}

TimeDependentPotential StaDrive::as_potential() const {
  auto self = std::make_shared<const StaDrive>(*this);
  return [self](double t) { return self->potential(t); };
}

}  // namespace ffst::sta
