#pragma once

#include <functional>

#include "ffst/core/wavefunction.hpp"
#include "ffst/sta/eigen_family.hpp"
#include "ffst/sta/r_schedule.hpp"

namespace ffst::sta {

/// Static potential shape V(x).
using PotentialShape = std::function<double(double x)>;

/// V_0(x, R) = V(x - R): a trap moved to position R.
PotentialBuilder translation_family(const Grid& grid, PotentialShape shape);
/// V_0(x, R) = R V(sqrt(R) x): a trap whose stiffness scales with R (R > 0).
PotentialBuilder compression_family(const Grid& grid, PotentialShape shape);

enum class AnalyticKind { translation, compression };

/// Closed-form auxiliary potential and additional phase for a moving or a
/// breathing trap (spatially uniform terms dropped):
///   translation:  dV = -m R'' x,                          f = (m/hbar) R' x
///   compression:  dV = (m R''/(4R) - 3 m R'^2/(8R^2)) x^2,  f = -(m R'/(4 hbar R)) x^2
class AnalyticAux {
 public:
  /// Throws InvalidArgument for a compression schedule with R <= 0 anywhere.
  AnalyticAux(AnalyticKind kind, RSchedule schedule, Grid grid, PhysicalConstants constants);

  AnalyticKind kind() const noexcept { return kind_; }
  const RSchedule& schedule() const noexcept { return schedule_; }
  PotentialField delta_v(double t) const;
  std::vector<double> phase(double t) const;

 private:
  AnalyticKind kind_;
  RSchedule schedule_;
  Grid grid_;
  PhysicalConstants constants_;
};

AnalyticAux analytic_translation_aux(const RSchedule& schedule, const Grid& grid,
                                     const PhysicalConstants& constants);
AnalyticAux analytic_compression_aux(const RSchedule& schedule, const Grid& grid,
                                     const PhysicalConstants& constants);

}  // namespace ffst::sta
