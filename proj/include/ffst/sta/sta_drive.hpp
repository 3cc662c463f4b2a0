#pragma once

#include <memory>
#include <span>
#include <vector>

#include "ffst/core/propagator.hpp"
#include "ffst/sta/eigen_family.hpp"
#include "ffst/sta/phase_equation.hpp"
#include "ffst/sta/r_schedule.hpp"

namespace ffst::sta {

/// The two driving-potential terms that only survive for complex eigenfunctions:
///   -(hbar^2/m) f' Im[phi'/phi] - hbar (dR/dt) Im[(dphi/dR)/phi].
/// Points where |phi|^2 < floor contribute zero.
std::vector<double> complex_state_terms(std::span<const Complex> phi,
                                        std::span<const Complex> phi_x,
                                        std::span<const Complex> phi_r,
                                        std::span<const double> f_gradient, double r_rate,
                                        const PhysicalConstants& constants, double floor = 0.0);

struct StaOptions {
  /// Step of the fourth-order differences for df/dt, as a fraction of T_F.
  double drive_step_fraction = 1.0 / 2000.0;
  PhaseOptions phase;
};

struct StaSample {
  PotentialField potential;
  std::vector<double> phase;  ///< additional phase f
  double r;
  double r_rate;
};

/// Shortcut driving potential built from an eigenstate family and the numeric
/// additional phase:
///   V_FF = V_0(., R) - hbar^2/(2m) (f')^2 - hbar df/dt
/// with its density-weighted mean removed at every t (a uniform shift only
/// changes the global phase). Family states are real, so the complex-state
/// terms vanish identically and are not evaluated.
class StaDrive {
 public:
  StaDrive(std::shared_ptr<const EigenFamily> family, RSchedule schedule, StaOptions options = {});

  const EigenFamily& family() const noexcept { return *family_; }
  const RSchedule& schedule() const noexcept { return schedule_; }

  StaSample evaluate(double t) const;
  PotentialField potential(double t) const { return evaluate(t).potential; }
  /// Additional phase at t (anchored at the density maximum).
  PhaseSolution phase(double t) const;
  /// phi_n(., R(t)) exp(i f).
  WaveFunction ff_wavefunction(double t) const;
  TimeDependentPotential as_potential() const;

 private:
  std::vector<double> phase_rate(double t, std::size_t anchor) const;

  std::shared_ptr<const EigenFamily> family_;
  RSchedule schedule_;
  StaOptions options_;
};

/// Removes the density-weighted mean of `delta` in place.
void remove_uniform_part(std::span<double> delta, std::span<const double> density);

}  // namespace ffst::sta
