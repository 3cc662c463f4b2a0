#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ffst/core/wavefunction.hpp"

namespace ffst::sta {

/// V_0(., R) for a control parameter value R.
using PotentialBuilder = std::function<PotentialField(double r)>;

struct FamilyOptions {
  /// Spacing of the parameter samples. Defaults to (r_max - r_min) / 1000.
  std::optional<double> step;
};

/// The n-th eigenstate phi_n(x; R) and energy E_n(R) tabulated on a uniform
/// R lattice covering [r_min, r_max] plus two guard samples on each side.
///
/// Neighbouring samples are kept in a continuous sign gauge (positive overlap).
/// d phi/dR comes from fourth-order central differences on the lattice, and
/// values between lattice points from four-point interpolation. Construction
/// throws LevelCrossing, naming the R interval, when state n stops being the
/// best continuation of itself between neighbouring samples.
class EigenFamily {
 public:
  static std::shared_ptr<const EigenFamily> build(const PotentialBuilder& builder, double r_min,
                                                  double r_max, int state_index, const Grid& grid,
                                                  const PhysicalConstants& constants,
                                                  const FamilyOptions& options = {});

  const Grid& grid() const noexcept { return grid_; }
  const PhysicalConstants& constants() const noexcept { return constants_; }
  const PotentialBuilder& builder() const noexcept { return builder_; }
  int state_index() const noexcept { return index_; }
  double r_min() const noexcept { return r_min_; }
  double r_max() const noexcept { return r_max_; }
  double step() const noexcept { return step_; }

  std::size_t sample_count() const noexcept { return r_.size(); }
  double sample_r(std::size_t j) const { return r_.at(j); }
  const std::vector<double>& sample_state(std::size_t j) const { return phi_.at(j); }
  double sample_energy(std::size_t j) const { return energy_.at(j); }

  /// phi_n(., R), real.
  std::vector<double> state(double r) const;
  /// d phi_n / dR at R, real.
  std::vector<double> state_derivative(double r) const;
  double energy(double r) const;
  WaveFunction wavefunction(double r) const;

 private:
  explicit EigenFamily(Grid grid) : grid_(std::move(grid)) {}
  double position(double r) const;  // fractional index into the interior samples

  Grid grid_;
  PhysicalConstants constants_;
  PotentialBuilder builder_;
  int index_ = 0;
  double r_min_ = 0.0, r_max_ = 0.0, step_ = 0.0;
  std::vector<double> r_;
  std::vector<std::vector<double>> phi_;
  std::vector<std::vector<double>> dphi_;  // interior samples only
  std::vector<double> energy_;
};

}  // namespace ffst::sta
