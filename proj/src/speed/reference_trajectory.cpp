#include "ffst/speed/reference_trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "ffst/core/errors.hpp"
#include "ffst/core/numerics.hpp"
#include "ffst/core/spectral.hpp"
#include "ffst/speed/phase.hpp"

namespace ffst::speed {

std::shared_ptr<const ReferenceTrajectory> ReferenceTrajectory::record(
    const WaveFunction& psi0, TimeDependentPotential v0, double duration,
    const PhysicalConstants& constants, const ReferenceOptions& options) {
  constants.validate();
  if (!(duration > 0.0)) throw InvalidArgument("reference duration must be positive");
  if (!(options.sample_interval > 0.0) || !(options.dt > 0.0))
    throw InvalidArgument("reference sample_interval and dt must be positive");
  if (!(options.node_fraction > 0.0) || options.node_fraction >= 1.0)
    throw InvalidArgument("node_threshold must be in (0, 1)");
  const auto intervals = static_cast<std::size_t>(std::llround(duration / options.sample_interval));
  if (intervals < 4)
    throw InvalidArgument("reference trajectory needs at least 4 sample intervals");

  std::shared_ptr<ReferenceTrajectory> traj(new ReferenceTrajectory());
  traj->constants_ = constants;
  traj->options_ = options;
  traj->duration_ = duration;
  traj->interval_ = duration / static_cast<double>(intervals);
  traj->potential_ = std::move(v0);

  std::vector<double> times(intervals);
  for (std::size_t j = 1; j <= intervals; ++j)
    times[j - 1] = j == intervals ? duration : static_cast<double>(j) * traj->interval_;
  PropagationOptions prop;
  prop.boundary_density_limit = options.boundary_density_limit;
  traj->samples_.reserve(intervals + 1);
  traj->samples_.push_back(psi0);
  auto states = propagate_to_times(psi0, traj->potential_, 0.0, times,
                                   std::min(options.dt, traj->interval_), constants, {}, prop);
  for (auto& s : states) traj->samples_.push_back(std::move(s));

  // Per-sample 2 pi offsets making the unwrapped phase continuous in time.
  traj->phase_offsets_.assign(traj->samples_.size(), 0.0);
  std::vector<double> previous;
  for (std::size_t j = 0; j < traj->samples_.size(); ++j) {
    const auto& psi = traj->samples_[j];
    double peak = 0.0;
    for (const auto& v : psi.values()) peak = std::max(peak, std::abs(v));
    PhaseField pf = extract_phase(psi, options.node_fraction * peak);
    if (j > 0) {
      const std::size_t anchor = static_cast<std::size_t>(
          std::max_element(pf.amplitude.begin(), pf.amplitude.end()) - pf.amplitude.begin());
      const double jump = pf.phase[anchor] - previous[anchor];
      traj->phase_offsets_[j] = -2.0 * std::numbers::pi * std::round(jump / (2.0 * std::numbers::pi));
    }
    for (auto& p : pf.phase) p += traj->phase_offsets_[j];
    previous = std::move(pf.phase);
  }
  return traj;
}

double ReferenceTrajectory::sample_time(std::size_t j) const noexcept {
  return j + 1 == samples_.size() ? duration_ : static_cast<double>(j) * interval_;
}

double ReferenceTrajectory::check_range(double lambda) const {
  const double tol = 1e-9 * duration_;
  if (!(lambda >= -tol && lambda <= duration_ + tol))
    throw InvalidArgument(fmt::format(
        "Lambda = {:.12g} is outside the sampled reference range [0, {}]", lambda, duration_));
  return std::clamp(lambda, 0.0, duration_);
}

WaveFunction ReferenceTrajectory::state_at(double lambda) const {
  lambda = check_range(lambda);
  const auto j = std::min(samples_.size() - 1,
                          static_cast<std::size_t>(std::floor(lambda / interval_)));
  const double t0 = sample_time(j);
  if (lambda <= t0) return samples_[j];
  return propagate(samples_[j], potential_, t0, lambda, options_.dt, constants_);
}

PotentialField ReferenceTrajectory::potential_at(double lambda) const {
  return potential_(check_range(lambda));
}

// eta_a(x_i) - eta_b(x_i), exact as long as it lies in (-pi, pi].
double ReferenceTrajectory::phase_difference(std::size_t a, std::size_t b, std::size_t i) const {
  return std::arg(samples_[a][i] * std::conj(samples_[b][i]));
}

PhaseSnapshot ReferenceTrajectory::phase_sample(std::size_t j) const {
  const WaveFunction& psi = samples_.at(j);
  const std::size_t n = psi.size();
  double peak = 0.0;
  for (const auto& v : psi.values()) peak = std::max(peak, std::abs(v));
  PhaseField pf = extract_phase(psi, options_.node_fraction * peak);

  PhaseSnapshot s;
  s.amplitude = std::move(pf.amplitude);
  s.phase = std::move(pf.phase);
  for (auto& p : s.phase) p += phase_offsets_[j];
  s.valid = std::move(pf.valid);

  const auto dpsi = spectral_derivative(psi.grid(), psi.values());
  s.phase_gradient.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    s.phase_gradient[i] = s.valid[i] ? (std::conj(psi[i]) * dpsi[i]).imag() / std::norm(psi[i]) : 0.0;
  freeze_invalid(s.phase_gradient, s.valid);

  // Fourth-order differences in time, one-sided near the ends.
  const std::size_t last = samples_.size() - 1;
  const double h = interval_;
  s.phase_rate.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!s.valid[i]) continue;
    auto d = [&](std::size_t a, std::size_t b) { return phase_difference(a, b, i); };
    double rate;
    if (j >= 2 && j + 2 <= last) {
      rate = (8.0 * d(j + 1, j - 1) - d(j + 2, j - 2)) / (12.0 * h);
    } else if (j == 0) {
      rate = (48.0 * d(1, 0) - 36.0 * d(2, 0) + 16.0 * d(3, 0) - 3.0 * d(4, 0)) / (12.0 * h);
    } else if (j == 1) {
      rate = (-3.0 * d(0, 1) + 18.0 * d(2, 1) - 6.0 * d(3, 1) + d(4, 1)) / (12.0 * h);
    } else if (j == last) {
      rate = -(48.0 * d(last - 1, last) - 36.0 * d(last - 2, last) + 16.0 * d(last - 3, last) -
               3.0 * d(last - 4, last)) / (12.0 * h);
    } else {
      rate = -(-3.0 * d(last, last - 1) + 18.0 * d(last - 2, last - 1) -
               6.0 * d(last - 3, last - 1) + d(last - 4, last - 1)) / (12.0 * h);
    }
    s.phase_rate[i] = rate;
  }
  freeze_invalid(s.phase_rate, s.valid);
  return s;
}

PhaseSnapshot ReferenceTrajectory::phase_at(double lambda) const {
  lambda = check_range(lambda);
  const CubicStencil st = cubic_stencil(lambda / interval_, samples_.size());
  const std::size_t n = grid().size();
  PhaseSnapshot out;
  out.amplitude.assign(n, 0.0);
  out.phase.assign(n, 0.0);
  out.phase_gradient.assign(n, 0.0);
  out.phase_rate.assign(n, 0.0);
  out.valid.assign(n, 1);
  for (std::size_t k = 0; k < 4; ++k) {
    const double w = st.weight[k];
    if (w == 0.0) continue;
    const PhaseSnapshot s = phase_sample(st.index[k]);
    for (std::size_t i = 0; i < n; ++i) {
      out.amplitude[i] += w * s.amplitude[i];
      out.phase[i] += w * s.phase[i];
      out.phase_gradient[i] += w * s.phase_gradient[i];
      out.phase_rate[i] += w * s.phase_rate[i];
      out.valid[i] = out.valid[i] && s.valid[i];
    }
  }
  return out;
}

}  // namespace ffst::speed
