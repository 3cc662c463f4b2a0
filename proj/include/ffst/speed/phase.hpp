#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ffst/core/wavefunction.hpp"

namespace ffst::speed {

/// Amplitude/phase decomposition psi = A exp(i eta) of a 1D state.
struct PhaseField {
  std::vector<double> amplitude;
  std::vector<double> phase;         ///< unwrapped; finite everywhere
  std::vector<std::uint8_t> valid;   ///< 0 where amplitude < node_threshold
  double invalid_mass = 0.0;         ///< probability carried by invalid points
};

/// Unwraps arg(psi) along x starting from the global density maximum, by
/// accumulating wrapped differences between consecutive valid points. Points
/// with amplitude < node_threshold are marked invalid and carry the phase of
/// their nearest valid neighbour. Throws NodeDominated when more than 20% of
/// the probability lies on invalid points.
PhaseField extract_phase(const WaveFunction& psi, double node_threshold);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Overwrites invalid entries with the value at the nearest valid index.
/// Throws NodeDominated when nothing is valid.
void freeze_invalid(std::span<double> field, std::span<const std::uint8_t> valid);

}  // namespace ffst::speed
