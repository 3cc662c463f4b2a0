#include "ffst/sta/analytic.hpp"

#include <cmath>

#include <fmt/core.h>

#include "ffst/core/errors.hpp"

namespace ffst::sta {

PotentialBuilder translation_family(const Grid& grid, PotentialShape shape) {
  return [grid, shape = std::move(shape)](double r) {
    PotentialField v(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = shape(grid.x(i) - r);
    return v;
  };
}

PotentialBuilder compression_family(const Grid& grid, PotentialShape shape) {
  return [grid, shape = std::move(shape)](double r) {
    if (!(r > 0.0))
      throw InvalidArgument(fmt::format("compression parameter must stay positive, got R = {}", r));
    const double root = std::sqrt(r);
    PotentialField v(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = r * shape(root * grid.x(i));
    return v;
  };
}

AnalyticAux::AnalyticAux(AnalyticKind kind, RSchedule schedule, Grid grid,
                         PhysicalConstants constants)
    : kind_(kind), schedule_(std::move(schedule)), grid_(std::move(grid)), constants_(constants) {
  constants_.validate();
  if (kind_ == AnalyticKind::compression && !(schedule_.r_min() > 0.0))
    throw InvalidArgument(fmt::format(
        "compression schedules need R > 0 throughout, but R reaches {}", schedule_.r_min()));
}

PotentialField AnalyticAux::delta_v(double t) const {
  const double m = constants_.mass;
  const double rate = schedule_.velocity(t), accel = schedule_.acceleration(t);
  PotentialField v(grid_);
  if (kind_ == AnalyticKind::translation) {
    for (std::size_t i = 0; i < grid_.size(); ++i) v[i] = -m * accel * grid_.x(i);
  } else {
    const double r = schedule_.value(t);
    const double c = m * accel / (4.0 * r) - 3.0 * m * rate * rate / (8.0 * r * r);
    for (std::size_t i = 0; i < grid_.size(); ++i) v[i] = c * grid_.x(i) * grid_.x(i);
  }
  return v;
}

std::vector<double> AnalyticAux::phase(double t) const {
  const double m = constants_.mass, hbar = constants_.hbar;
  const double rate = schedule_.velocity(t);
  std::vector<double> f(grid_.size());
  if (kind_ == AnalyticKind::translation) {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = m / hbar * rate * grid_.x(i);
  } else {
    const double c = -m * rate / (4.0 * hbar * schedule_.value(t));
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = c * grid_.x(i) * grid_.x(i);
  }
  return f;
}

AnalyticAux analytic_translation_aux(const RSchedule& schedule, const Grid& grid,
                                     const PhysicalConstants& constants) {
  return AnalyticAux(AnalyticKind::translation, schedule, grid, constants);
}

AnalyticAux analytic_compression_aux(const RSchedule& schedule, const Grid& grid,
                                     const PhysicalConstants& constants) {
  return AnalyticAux(AnalyticKind::compression, schedule, grid, constants);
}

}  // namespace ffst::sta
