#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ffst/core/fft.hpp"
#include "ffst/core/wavefunction.hpp"

namespace ffst {

/// V(x, t) supplied as a whole field for a requested time.
using TimeDependentPotential = std::function<PotentialField(double t)>;

/// Called with (t, psi) at the start time and after every step.
using StepObserver = std::function<void(double, const WaveFunction&)>;

struct PropagationOptions {
  /// When set, |psi|^2 at either edge point above this value aborts the run:
  /// the periodic kinetic operator would otherwise wrap probability around.
  std::optional<double> boundary_density_limit;
};

/// Second-order (Strang) split-operator stepper:
/// exp(-iT dt/2) exp(-iV(t+dt/2) dt) exp(-iT dt/2), kinetic factors applied in k-space.
class SplitOperatorPropagator {
 public:
  SplitOperatorPropagator(Grid grid, PhysicalConstants constants);

  /// Advances psi by dt under v_mid. A negative dt steps backward in time.
  void step(WaveFunction& psi, const PotentialField& v_mid, double dt);

  const Grid& grid() const noexcept { return grid_; }
  const PhysicalConstants& constants() const noexcept { return constants_; }

 private:
  void prepare_kinetic(double dt);
  void apply_kinetic(std::span<Complex> values) const;

  Grid grid_;
  PhysicalConstants constants_;
  std::unique_ptr<FourierTransform> fft_;
  double kinetic_dt_ = 0.0;
  std::vector<Complex> half_kinetic_;
};

/// Propagates psi from t0 to t1 (> t0) with the largest uniform step <= dt.
/// Throws NumericalError, naming the time and max|V|, if the state turns non-finite.
WaveFunction propagate(WaveFunction psi, const TimeDependentPotential& v, double t0, double t1,
                       double dt, const PhysicalConstants& constants,
                       const StepObserver& observe = {}, const PropagationOptions& options = {});

/// Propagates through an increasing list of times (all >= t0), landing exactly on
/// each one, and returns the states there.
std::vector<WaveFunction> propagate_to_times(const WaveFunction& psi0,
                                             const TimeDependentPotential& v, double t0,
                                             std::span<const double> times, double dt,
                                             const PhysicalConstants& constants,
                                             const StepObserver& observe = {},
                                             const PropagationOptions& options = {});

}  // namespace ffst
