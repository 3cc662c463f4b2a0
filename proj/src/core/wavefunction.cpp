#include "ffst/core/wavefunction.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "ffst/core/errors.hpp"

namespace ffst {

WaveFunction::WaveFunction(Grid grid) : grid_(std::move(grid)), values_(grid_.size()) {}

WaveFunction::WaveFunction(Grid grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw InvalidArgument(fmt::format("wavefunction has {} values for a {}-point grid",
                                      values_.size(), grid_.size()));
}

double WaveFunction::norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return s * grid_.dx();
}

double WaveFunction::norm() const noexcept { return std::sqrt(norm_squared()); }

WaveFunction& WaveFunction::normalize() {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw NumericalError(fmt::format("cannot normalize wavefunction with norm {}", n));
  const double inv = 1.0 / n;
  for (auto& v : values_) v *= inv;
  return *this;
}

std::vector<double> WaveFunction::density() const {
  std::vector<double> rho(values_.size());
  std::transform(values_.begin(), values_.end(), rho.begin(),
                 [](const Complex& v) { return std::norm(v); });
  return rho;
}

std::vector<double> WaveFunction::amplitude() const {
  std::vector<double> a(values_.size());
  std::transform(values_.begin(), values_.end(), a.begin(),
                 [](const Complex& v) { return std::abs(v); });
  return a;
}

PotentialField::PotentialField(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

PotentialField::PotentialField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw InvalidArgument(fmt::format("potential has {} values for a {}-point grid",
                                      values_.size(), grid_.size()));
}

double PotentialField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void PotentialField::require_finite(const char* context) const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw NumericalError(
          fmt::format("{}: non-finite potential at x={}", context, grid_.x(i)));
  }
}

Complex inner_product(const WaveFunction& a, const WaveFunction& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s * a.grid().dx();
}

double fidelity(const WaveFunction& a, const WaveFunction& b) {
  // Dividing by both norms keeps round-off drift in the norm from pushing the
  // overlap above 1.
  const double scale = a.norm_squared() * b.norm_squared();
  if (!(scale > 0.0)) throw InvalidArgument("fidelity of a null state");
  return std::norm(inner_product(a, b)) / scale;
}

double norm(const WaveFunction& psi) { return psi.norm(); }

double density_l2_error(std::span<const double> a, std::span<const double> b, double dx) {
  if (a.size() != b.size()) throw InvalidArgument("density_l2_error: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s * dx);
}

double density_l2_error(const WaveFunction& a, const WaveFunction& b) {
  require_same_grid(a.grid(), b.grid(), "density_l2_error");
  return density_l2_error(a.density(), b.density(), a.grid().dx());
}

double phase_aligned_distance(const WaveFunction& a, const WaveFunction& b) {
  const Complex overlap = inner_product(b, a);
  const double mag = std::abs(overlap);
  const Complex rot = mag > 0.0 ? overlap / mag : Complex{1.0, 0.0};
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - rot * b[i]);
  return std::sqrt(s * a.grid().dx());
}

WaveFunction gaussian_packet(const Grid& grid, double x0, double k0, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidArgument(fmt::format("gaussian sigma must be positive, got {}", sigma));
  if (x0 - 5.0 * sigma < grid.x_min() || x0 + 5.0 * sigma > grid.x_max())
    throw InvalidArgument(fmt::format(
        "gaussian packet x0={} sigma={} does not fit inside [{}, {}]", x0, sigma,
        grid.x_min(), grid.x_max()));

  WaveFunction psi(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid.x(i) - x0;
    psi[i] = std::exp(Complex{-d * d / (4.0 * sigma * sigma), k0 * grid.x(i)});
  }
  psi.normalize();
  const double edge = std::max(std::norm(psi[0]), std::norm(psi[grid.size() - 1]));
  if (edge > 1e-10)
    throw InvalidArgument(
        fmt::format("gaussian packet leaks past the grid boundary (edge density {:.3g})", edge));
  return psi;
}

}  // namespace ffst
