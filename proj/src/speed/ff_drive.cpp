#include "ffst/speed/ff_drive.hpp"

#include <cmath>

#include <fmt/core.h>

#include "ffst/core/errors.hpp"
#include "ffst/speed/phase.hpp"

namespace ffst::speed {

std::vector<double> additional_phase(double alpha, std::span<const double> eta) {
  std::vector<double> f(eta.size());
  const double factor = alpha - 1.0;
  for (std::size_t i = 0; i < eta.size(); ++i) f[i] = factor * eta[i];
  return f;
}

WaveFunction ff_wavefunction(const WaveFunction& reference_state, std::span<const double> f) {
  if (f.size() != reference_state.size())
    throw InvalidArgument("additional phase length does not match the state");
  std::vector<Complex> values(reference_state.values().begin(), reference_state.values().end());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] *= std::polar(1.0, f[i]);
  return WaveFunction(reference_state.grid(), std::move(values));
}

PotentialField ff_potential(const ReferenceTrajectory& reference, const AlphaSchedule& schedule,
                            double t) {
  if (!schedule.differentiable_at(t))
    throw InvalidArgument(fmt::format(
        "alpha has a kink at t = {:.12g}; its rate is undefined there. Use a smooth schedule "
        "(constant, smooth-ramp, pause-window, reverse-window or cubic-spline samples)",
        t));
  const double alpha = schedule.alpha(t);
  const double alpha_rate = schedule.rate(t);
  const double lambda = schedule.lambda(t);
  PotentialField v0 = reference.potential_at(lambda);
  if (alpha == 1.0 && alpha_rate == 0.0) return v0;

  const PhaseSnapshot ph = reference.phase_at(lambda);
  const auto& c = reference.constants();
  const double s = alpha * alpha - 1.0;
  const std::size_t n = v0.size();
  std::vector<double> aux(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = ph.phase_gradient[i];
    aux[i] = -c.hbar * alpha_rate * ph.phase[i] - c.hbar * s * ph.phase_rate[i] -
             0.5 * c.hbar * c.hbar / c.mass * s * g * g;
  }
  freeze_invalid(aux, ph.valid);
  std::vector<double> values(v0.values().begin(), v0.values().end());
  for (std::size_t i = 0; i < n; ++i) values[i] += aux[i];
  PotentialField out(v0.grid(), std::move(values));
  out.require_finite("driving potential");
  return out;
}

SpeedControlDrive::SpeedControlDrive(std::shared_ptr<const ReferenceTrajectory> reference,
                                     AlphaSchedule schedule)
    : reference_(std::move(reference)), schedule_(std::move(schedule)) {
  if (!reference_) throw InvalidArgument("speed-control drive needs a reference trajectory");
  // Lambda must stay inside the recorded window over the whole schedule.
  const double span = reference_->duration();
  auto bps = schedule_.breakpoints();
  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    constexpr int probes = 16;
    for (int p = 0; p <= probes; ++p) {
      const double t = bps[k] + (bps[k + 1] - bps[k]) * p / probes;
      const double l = schedule_.lambda(t);
      if (l < -1e-9 * span || l > span * (1.0 + 1e-9))
        throw InvalidArgument(fmt::format(
            "schedule reaches Lambda = {:.9g} at t = {:.9g}, outside the reference range [0, {}]",
            l, t, span));
    }
  }
}

DriveSample SpeedControlDrive::evaluate(double t) const {
  const double lambda = schedule_.lambda(t);
  const double alpha = schedule_.alpha(t);
  std::vector<double> f;
  if (alpha == 1.0) {
    f.assign(reference_->grid().size(), 0.0);
  } else {
    f = additional_phase(alpha, reference_->phase_at(lambda).phase);
  }
  return DriveSample{potential(t), std::move(f), lambda, alpha};
}

WaveFunction SpeedControlDrive::ff_wavefunction(double t) const {
  const double lambda = schedule_.lambda(t);
  const double alpha = schedule_.alpha(t);
  WaveFunction ref = reference_->state_at(lambda);
  if (alpha == 1.0) return ref;
  return speed::ff_wavefunction(ref, additional_phase(alpha, reference_->phase_at(lambda).phase));
}

TimeDependentPotential SpeedControlDrive::as_potential() const {
  auto ref = reference_;
  auto sched = schedule_;
  return [ref, sched](double t) { return ff_potential(*ref, sched, t); };
}

}  // namespace ffst::speed
