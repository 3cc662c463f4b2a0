#pragma once

#include <vector>

#include "ffst/core/wavefunction.hpp"

namespace ffst {

struct Eigenstate {
  double energy;
  WaveFunction state;  ///< real-valued, unit norm, sign-gauge fixed
};

/// Lowest n_states bound states of -hbar^2/(2m) d^2/dx^2 + V on the grid, energies ascending.
///
/// The Hamiltonian uses the 9-point (8th-order) finite-difference Laplacian with
/// zero Dirichlet data outside the grid. Eigenpairs are seeded from the 3-point
/// tridiagonal problem and refined by Rayleigh-quotient inverse iteration on the
/// banded matrix. The sign of each eigenfunction is chosen so that its leftmost
/// significant lobe is positive, which keeps parameterized families continuous
/// for odd as well as even states.
///
/// Throws NonConfining when the potential at either boundary does not exceed the
/// highest requested energy.
std::vector<Eigenstate> solve_eigenstates(const PotentialField& v, int n_states,
                                          const PhysicalConstants& constants);

/// Flips the sign of a real eigenfunction so its leftmost lobe (first point with
/// |phi| >= 1e-2 max|phi|) is positive.
void fix_sign_gauge(WaveFunction& phi);

}  // namespace ffst
