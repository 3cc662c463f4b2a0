#pragma once

#include <optional>

#include "ffst/core/propagator.hpp"
#include "ffst/harness/scenario.hpp"
#include "ffst/sta/analytic.hpp"

namespace ffst::harness {

Grid scenario_grid(const Scenario& s);

/// Static shape V(x) of the scenario potential (the harmonic drive is ignored).
sta::PotentialShape potential_shape(const PotentialSpec& spec, const PhysicalConstants& constants);

/// V_0(x, t) for the speed-control reference, including the optional
/// oscillating harmonic centre.
TimeDependentPotential reference_potential(const Scenario& s, const Grid& grid);

/// V_0(x, R) for the shortcut branches.
sta::PotentialBuilder family_builder(const Scenario& s, const Grid& grid);
FamilyKind family_kind(const Scenario& s);

/// Initial state: a Gaussian packet, or eigenstate `index` of V_0 at t = 0
/// (speed-control) or at R_i (shortcut branches).
WaveFunction initial_state(const Scenario& s, const Grid& grid);

/// Closed-form reference state at time t when one exists: a Gaussian in free
/// space, or a minimum-uncertainty Gaussian in a static harmonic trap.
std::optional<WaveFunction> closed_form_reference(const Scenario& s, const Grid& grid, double t);

}  // namespace ffst::harness
