#pragma once

// Closed-form reference solutions used as independent oracles by the tests.
// Nothing here calls into the propagators under test.

#include <cmath>
#include <complex>
#include <numbers>

#include "ffst/core/wavefunction.hpp"

namespace ffst::oracle {

/// Freely dispersing Gaussian psi(x,0) ~ exp(-(x-x0)^2/(4 sigma^2) + i k0 x), at time t.
inline WaveFunction free_gaussian(const Grid& grid, double x0, double k0, double sigma, double t,
                                  double hbar = 1.0, double mass = 1.0) {
  const std::complex<double> s{sigma * sigma, hbar * t / (2.0 * mass)};
  const double v = hbar * k0 / mass;
  WaveFunction psi(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid.x(i) - x0 - v * t;
    psi[i] = std::sqrt(sigma / s) *
             std::exp(-d * d / (4.0 * s) + std::complex<double>{0.0, k0 * (grid.x(i) - 0.5 * v * t)});
  }
  return psi.normalize();
}

/// Harmonic-oscillator ground state (hbar = m = 1) for angular frequency omega, centred at c.
inline WaveFunction harmonic_ground(const Grid& grid, double omega = 1.0, double c = 0.0) {
  WaveFunction psi(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid.x(i) - c;
    psi[i] = std::pow(omega / std::numbers::pi, 0.25) * std::exp(-0.5 * omega * d * d);
  }
  return psi;
}

/// First excited harmonic state (hbar = m = omega = 1), centred at c.
inline WaveFunction harmonic_first_excited(const Grid& grid, double c = 0.0) {
  WaveFunction psi(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid.x(i) - c;
    psi[i] = std::sqrt(2.0) * std::pow(std::numbers::pi, -0.25) * d * std::exp(-0.5 * d * d);
  }
  return psi;
}

/// Coherent state of V = x^2/2 released from displacement a at t = 0 (up to global phase).
inline WaveFunction coherent_state(const Grid& grid, double a, double t) {
  const double q = a * std::cos(t), p = -a * std::sin(t);
  WaveFunction psi(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid.x(i) - q;
    psi[i] = std::pow(std::numbers::pi, -0.25) *
             std::exp(std::complex<double>{-0.5 * d * d, p * grid.x(i)});
  }
  return psi;
}

inline double mean_position(const WaveFunction& psi) {
  double s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) s += std::norm(psi[i]) * psi.grid().x(i);
  return s * psi.grid().dx();
}

inline double variance(const WaveFunction& psi) {
  const double m = mean_position(psi);
  double s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double d = psi.grid().x(i) - m;
    s += std::norm(psi[i]) * d * d;
  }
  return s * psi.grid().dx();
}

}  // namespace ffst::oracle
