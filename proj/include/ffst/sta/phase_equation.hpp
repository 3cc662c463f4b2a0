#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ffst/sta/eigen_family.hpp"

namespace ffst::sta {

struct PhaseOptions {
  /// Points with phi^2 below node_threshold * max phi^2 are treated as nodes or tails.
  double node_threshold = 1e-10;
  /// A node is singular when the running source integral there exceeds this
  /// fraction of its maximum magnitude.
  double singularity_tolerance = 1e-5;
  /// Around an interior node, f' is interpolated from both sides wherever
  /// phi^2 < node_guard * max phi^2; dividing there would amplify quadrature
  /// residuals.
  double node_guard = 1e-3;
};

struct PhaseSolution {
  std::vector<double> phase;     ///< f, zero at the anchor
  std::vector<double> gradient;  ///< df/dx
  std::vector<std::uint8_t> valid;
  std::size_t anchor = 0;        ///< grid index of the density maximum
};

/// Solves |phi|^2 f'' + 2 f' phi phi' + (2m/hbar) (dR/dt) phi dphi/dR = 0 for a
/// real phi through its first integral
///   f'(x) = -(2m/hbar) (dR/dt) / phi(x)^2 * int_{x_min}^{x} phi dphi/dR.
/// The running integral is accumulated from the left up to the density maximum
/// and from the right beyond it, so each tail only sees its own small values.
/// At nodes and tails (see PhaseOptions) f' is bridged linearly between valid
/// neighbours and held constant past the outermost valid points. f follows by
/// integration, anchored at `anchor` (default: the density maximum).
///
/// Throws NodeSingularity with the node position when the integral does not
/// vanish at a node of phi, i.e. when f' genuinely diverges there.
PhaseSolution solve_phase_equation(const Grid& grid, std::span<const double> phi,
                                   std::span<const double> phi_r, double r_rate,
                                   const PhysicalConstants& constants,
                                   const PhaseOptions& options = {},
                                   std::optional<std::size_t> anchor = std::nullopt);

/// Same, for the family member at R.
PhaseSolution solve_phase_equation(const EigenFamily& family, double r, double r_rate,
                                   const PhaseOptions& options = {},
                                   std::optional<std::size_t> anchor = std::nullopt);

}  // namespace ffst::sta
