#include "ffst/harness/model.hpp"

#include <cmath>
#include <complex>

#include "ffst/core/eigensolver.hpp"

namespace ffst::harness {
namespace {

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

bool static_harmonic(const PotentialSpec& p) {
  return p.kind == PotentialKind::harmonic &&
         (p.drive_amplitude == 0.0 || p.drive_frequency == 0.0);
}

}  // namespace

Grid scenario_grid(const Scenario& s) {
  return make_grid(s.grid.n_points, s.grid.x_min, s.grid.x_max);
}

sta::PotentialShape potential_shape(const PotentialSpec& p, const PhysicalConstants& c) {
  const double k = c.mass * p.omega * p.omega;
  switch (p.kind) {
    case PotentialKind::free: return [](double) { return 0.0; };
    case PotentialKind::harmonic:
      return [k, x0 = p.center](double x) { return 0.5 * k * (x - x0) * (x - x0); };
    case PotentialKind::anharmonic:
      return [k, x0 = p.center, q = p.quartic](double x) {
        const double d = (x - x0) * (x - x0);
        return 0.5 * k * d + q * d * d;
      };
    case PotentialKind::box:
      return [x0 = p.center, a = p.half_width, depth = p.depth, w = p.wall_width](double x) {
        return depth * (logistic((x - x0 - a) / w) + logistic(-(x - x0 + a) / w));
      };
  }
  return [](double) { return 0.0; };
}

TimeDependentPotential reference_potential(const Scenario& s, const Grid& grid) {
  const PotentialSpec& p = s.potential;
  if (p.kind == PotentialKind::harmonic && p.drive_amplitude != 0.0 && p.drive_frequency != 0.0) {
    const double k = s.constants.mass * p.omega * p.omega;
    return [grid, k, p](double t) {
      const double c = p.center + p.drive_amplitude * std::sin(p.drive_frequency * t);
      PotentialField v(grid);
      for (std::size_t i = 0; i < grid.size(); ++i) v[i] = 0.5 * k * (grid.x(i) - c) * (grid.x(i) - c);
      return v;
    };
  }
  const auto shape = potential_shape(p, s.constants);
  PotentialField v(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = shape(grid.x(i));
  return [v](double) { return v; };
}

FamilyKind family_kind(const Scenario& s) {
  switch (s.branch) {
    case Branch::sta_transport: return FamilyKind::translation;
    case Branch::sta_compression: return FamilyKind::compression;
    default: return s.potential.family.value_or(FamilyKind::translation);
  }
}

sta::PotentialBuilder family_builder(const Scenario& s, const Grid& grid) {
  auto shape = potential_shape(s.potential, s.constants);
  return family_kind(s) == FamilyKind::translation ? sta::translation_family(grid, shape)
                                                   : sta::compression_family(grid, shape);
}

WaveFunction initial_state(const Scenario& s, const Grid& grid) {
  const auto& init = s.initial_state;
  if (init.kind == InitialKind::gaussian) return gaussian_packet(grid, init.x0, init.k0, init.sigma);
  const PotentialField v = is_sta(s.branch) ? family_builder(s, grid)(build_r_schedule(s).value(0.0))
                                            : reference_potential(s, grid)(0.0);
  auto states = solve_eigenstates(v, init.index + 1, s.constants);
  return std::move(states.back().state);
}

std::optional<WaveFunction> closed_form_reference(const Scenario& s, const Grid& grid, double t) {
  if (s.initial_state.kind != InitialKind::gaussian || is_sta(s.branch)) return std::nullopt;
  const auto& init = s.initial_state;
  const double hbar = s.constants.hbar, m = s.constants.mass;
  using C = std::complex<double>;
  WaveFunction psi(grid);
  if (s.potential.kind == PotentialKind::free) {
    const C width{init.sigma * init.sigma, hbar * t / (2.0 * m)};
    const double v = hbar * init.k0 / m;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double d = grid.x(i) - init.x0 - v * t;
      psi[i] = std::sqrt(init.sigma / width) *
               std::exp(-d * d / (4.0 * width) + C{0.0, init.k0 * (grid.x(i) - 0.5 * v * t)});
    }
    return psi.normalize();
  }
  if (static_harmonic(s.potential)) {
    const double w = s.potential.omega, c = s.potential.center;
    const double ground_sigma = std::sqrt(hbar / (2.0 * m * w));
    if (std::abs(init.sigma - ground_sigma) > 1e-12 * ground_sigma) return std::nullopt;
    const double q = c + (init.x0 - c) * std::cos(w * t) + hbar * init.k0 / (m * w) * std::sin(w * t);
    const double p = -m * w * (init.x0 - c) * std::sin(w * t) + hbar * init.k0 * std::cos(w * t);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double d = grid.x(i) - q;
      psi[i] = std::exp(C{-m * w * d * d / (2.0 * hbar), p * grid.x(i) / hbar});
    }
    return psi.normalize();
  }
  return std::nullopt;
}

}  // namespace ffst::harness
