#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ffst/core/propagator.hpp"
#include "ffst/core/wavefunction.hpp"

namespace ffst::speed {

struct ReferenceOptions {
  double sample_interval = 1e-3;  ///< dt_ref between stored snapshots
  double dt = 1e-3;               ///< propagation step (<= sample_interval)
  double node_fraction = 1e-6;    ///< phase invalid below node_fraction * max amplitude
  std::optional<double> boundary_density_limit = 1e-10;
};

/// Phase data of the reference state at one reference time.
struct PhaseSnapshot {
  std::vector<double> amplitude;
  std::vector<double> phase;           ///< eta, continuous in time across samples
  std::vector<double> phase_gradient;  ///< d eta / dx
  std::vector<double> phase_rate;      ///< d eta / d(reference time)
  std::vector<std::uint8_t> valid;
};

/// Snapshots Psi_0(., t'_j) of a reference evolution on t'_j = j * dt_ref.
///
/// Only the complex states are stored. Phase data are derived on demand:
///  - eta by spatial unwrapping, shifted by a per-sample multiple of 2 pi so it
///    is continuous in time;
///  - d eta/dx = Im(conj(psi) psi') / |psi|^2 with a spectral psi';
///  - d eta/dt' by fourth-order central differences of arg(psi_a conj(psi_b)),
///    which never needs a temporal unwrap. Phases must change by less than pi
///    over four sample intervals.
/// Values between samples come from four-point (cubic) interpolation in t'.
class ReferenceTrajectory {
 public:
  /// Propagates psi0 under v0 over [0, duration] and records the snapshots.
  /// Throws NodeDominated if any snapshot has too much mass on phase nodes.
  static std::shared_ptr<const ReferenceTrajectory> record(const WaveFunction& psi0,
                                                           TimeDependentPotential v0,
                                                           double duration,
                                                           const PhysicalConstants& constants,
                                                           const ReferenceOptions& options);

  const Grid& grid() const noexcept { return samples_.front().grid(); }
  const PhysicalConstants& constants() const noexcept { return constants_; }
  const ReferenceOptions& options() const noexcept { return options_; }
  double duration() const noexcept { return duration_; }
  double sample_interval() const noexcept { return interval_; }
  std::size_t sample_count() const noexcept { return samples_.size(); }
  double sample_time(std::size_t j) const noexcept;
  const WaveFunction& sample(std::size_t j) const { return samples_.at(j); }

  /// Psi_0(., lambda): the nearest earlier snapshot advanced to lambda.
  WaveFunction state_at(double lambda) const;
  /// V_0(., lambda), evaluated directly.
  PotentialField potential_at(double lambda) const;

  PhaseSnapshot phase_sample(std::size_t j) const;
  /// Cubic interpolation of phase data in reference time. A point is valid only
  /// if it is valid in every contributing snapshot.
  PhaseSnapshot phase_at(double lambda) const;

  /// Throws InvalidArgument when lambda is outside [0, duration].
  double check_range(double lambda) const;

 private:
  ReferenceTrajectory() = default;
  double phase_difference(std::size_t a, std::size_t b, std::size_t i) const;

  PhysicalConstants constants_;
  ReferenceOptions options_;
  double duration_ = 0.0;
  double interval_ = 0.0;
  TimeDependentPotential potential_;
  std::vector<WaveFunction> samples_;
  std::vector<double> phase_offsets_;
};

}  // namespace ffst::speed
