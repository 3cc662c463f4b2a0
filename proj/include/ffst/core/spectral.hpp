#pragma once

#include <span>
#include <vector>

#include "ffst/core/grid.hpp"
#include "ffst/core/wavefunction.hpp"

namespace ffst {

enum class DerivativeMethod {
  spectral,          ///< FFT differentiation; field must be periodic-safe
  central_difference ///< second-order stencil, one-sided at the ends
};

/// d/dx of a real field sampled on grid.
std::vector<double> gradient(const Grid& grid, std::span<const double> field,
                             DerivativeMethod method = DerivativeMethod::spectral);

/// Spectral d/dx of a complex field.
std::vector<Complex> spectral_derivative(const Grid& grid, std::span<const Complex> field);

/// <psi| -hbar^2/(2m) d^2/dx^2 + V |psi> / <psi|psi>, kinetic term evaluated spectrally.
double expectation_energy(const WaveFunction& psi, const PotentialField& v,
                          const PhysicalConstants& constants);

}  // namespace ffst
