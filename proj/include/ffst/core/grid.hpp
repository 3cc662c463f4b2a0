#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ffst {

/// Units for the Schrödinger equation. Natural units by default.
struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;

  /// Throws InvalidArgument unless both constants are strictly positive.
  void validate() const;
  bool operator==(const PhysicalConstants&) const = default;
};

/// Uniform periodic 1D lattice x_i = x_min + i*dx, i = 0..n-1, with the
/// matching FFT wavenumbers in FFTW ordering (0, 1, ..., n/2-1, -n/2, ..., -1).
///
/// Grid is a cheap handle: copies share the same immutable coordinate arrays.
class Grid {
 public:
  Grid(std::size_t n_points, double x_min, double x_max);

  std::size_t size() const noexcept { return data_->n; }
  double x_min() const noexcept { return data_->x_min; }
  double x_max() const noexcept { return data_->x_max; }
  double dx() const noexcept { return data_->dx; }
  double length() const noexcept { return data_->x_max - data_->x_min; }

  double x(std::size_t i) const noexcept { return data_->x[i]; }
  std::span<const double> positions() const noexcept { return data_->x; }
  std::span<const double> wavenumbers() const noexcept { return data_->k; }

  /// Index of the grid point closest to position.
  std::size_t nearest_index(double position) const noexcept;

  bool operator==(const Grid& other) const noexcept;

 private:
  struct Data {
    std::size_t n;
    double x_min, x_max, dx;
    std::vector<double> x, k;
  };
  std::shared_ptr<const Data> data_;
};

Grid make_grid(std::size_t n_points, double x_min, double x_max);

/// Throws InvalidArgument when the two grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* context);

}  // namespace ffst
