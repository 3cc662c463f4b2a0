#pragma once

#include <memory>
#include <span>
#include <vector>

#include "ffst/core/propagator.hpp"
#include "ffst/speed/alpha_schedule.hpp"
#include "ffst/speed/reference_trajectory.hpp"

namespace ffst::speed {

/// f = (alpha - 1) * eta, pointwise.
std::vector<double> additional_phase(double alpha, std::span<const double> eta);

/// reference_state * exp(i f). The amplitude is left untouched.
WaveFunction ff_wavefunction(const WaveFunction& reference_state, std::span<const double> f);

/// Driving potential at controlled time t:
///   V_0(Lambda) - hbar alpha' eta - hbar (alpha^2 - 1) d eta/d Lambda
///               - hbar^2/(2m) (alpha^2 - 1) (d eta/dx)^2
/// with every phase quantity taken at Lambda(t). Outside the valid phase
/// region the auxiliary part is frozen at its nearest valid value.
PotentialField ff_potential(const ReferenceTrajectory& reference, const AlphaSchedule& schedule,
                            double t);

/// Everything the controlled evolution needs at one instant.
struct DriveSample {
  PotentialField potential;
  std::vector<double> phase;  ///< additional phase f
  double lambda;
  double alpha;
};

/// Speed-controlled drive built from a recorded reference and an alpha schedule.
/// Evaluation is pure; distinct times may be evaluated concurrently.
class SpeedControlDrive {
 public:
  SpeedControlDrive(std::shared_ptr<const ReferenceTrajectory> reference, AlphaSchedule schedule);

  const ReferenceTrajectory& reference() const noexcept { return *reference_; }
  const AlphaSchedule& schedule() const noexcept { return schedule_; }

  DriveSample evaluate(double t) const;
  PotentialField potential(double t) const { return ff_potential(*reference_, schedule_, t); }
  /// Psi_FF(t), built from the reference state at Lambda(t).
  WaveFunction ff_wavefunction(double t) const;
  /// Adapter for the propagator.
  TimeDependentPotential as_potential() const;

 private:
  std::shared_ptr<const ReferenceTrajectory> reference_;
  AlphaSchedule schedule_;
};

}  // namespace ffst::speed
