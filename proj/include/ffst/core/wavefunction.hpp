#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ffst/core/grid.hpp"

namespace ffst {

using Complex = std::complex<double>;

/// Complex amplitudes sampled on a Grid.
class WaveFunction {
 public:
  explicit WaveFunction(Grid grid);
  WaveFunction(Grid grid, std::vector<Complex> values);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<Complex> values() noexcept { return values_; }
  std::span<const Complex> values() const noexcept { return values_; }
  Complex& operator[](std::size_t i) noexcept { return values_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return values_[i]; }

  /// sum |psi_i|^2 dx
  double norm_squared() const noexcept;
  double norm() const noexcept;
  /// Rescales to unit norm; throws NumericalError for a null or non-finite state.
  WaveFunction& normalize();

  std::vector<double> density() const;
  std::vector<double> amplitude() const;

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

/// Real potential energy on a Grid. Values must be finite.
class PotentialField {
 public:
  explicit PotentialField(Grid grid);
  PotentialField(Grid grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  double max_abs() const noexcept;
  /// Throws NumericalError on NaN/Inf entries.
  void require_finite(const char* context) const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// <a|b> = sum conj(a_i) b_i dx
Complex inner_product(const WaveFunction& a, const WaveFunction& b);

/// |<a|b>|^2 / (<a|a> <b|b>): symmetric, blind to global phases, at most 1.
double fidelity(const WaveFunction& a, const WaveFunction& b);

double norm(const WaveFunction& psi);

/// sqrt(sum (|a|^2 - |b|^2)^2 dx)
double density_l2_error(const WaveFunction& a, const WaveFunction& b);
double density_l2_error(std::span<const double> a, std::span<const double> b, double dx);

/// min over theta of || a - e^{i theta} b ||, evaluated without cancellation.
double phase_aligned_distance(const WaveFunction& a, const WaveFunction& b);

/// Normalized psi ~ exp(-(x-x0)^2/(4 sigma^2) + i k0 x). Rejects sigma <= 0 and
/// packets whose support (x0 +- 5 sigma) or tail density (> 1e-10 at the edges)
/// leaks past the grid.
WaveFunction gaussian_packet(const Grid& grid, double x0, double k0, double sigma);

}  // namespace ffst
