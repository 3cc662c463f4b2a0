#include "ffst/core/spectral.hpp"

#include "ffst/core/errors.hpp"
#include "ffst/core/fft.hpp"

namespace ffst {

std::vector<Complex> spectral_derivative(const Grid& grid, std::span<const Complex> field) {
  if (field.size() != grid.size()) throw InvalidArgument("spectral_derivative: size mismatch");
  std::vector<Complex> work(field.begin(), field.end());
  const auto& fft = fourier_transform(grid.size());
  fft.forward(work);
  const auto k = grid.wavenumbers();
  const std::size_t nyquist = grid.size() / 2;
  for (std::size_t i = 0; i < work.size(); ++i)
    work[i] = (i == nyquist) ? Complex{} : work[i] * Complex{0.0, k[i]};
  fft.inverse(work);
  return work;
}

std::vector<double> gradient(const Grid& grid, std::span<const double> field,
                             DerivativeMethod method) {
  const std::size_t n = grid.size();
  if (field.size() != n) throw InvalidArgument("gradient: size mismatch");
  std::vector<double> out(n);
  if (method == DerivativeMethod::spectral) {
    std::vector<Complex> c(field.begin(), field.end());
    const auto d = spectral_derivative(grid, c);
    for (std::size_t i = 0; i < n; ++i) out[i] = d[i].real();
    return out;
  }
  const double h = grid.dx();
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (field[i + 1] - field[i - 1]) / (2.0 * h);
  out[0] = (-3.0 * field[0] + 4.0 * field[1] - field[2]) / (2.0 * h);
  out[n - 1] = (3.0 * field[n - 1] - 4.0 * field[n - 2] + field[n - 3]) / (2.0 * h);
  return out;
}

double expectation_energy(const WaveFunction& psi, const PotentialField& v,
                          const PhysicalConstants& constants) {
  require_same_grid(psi.grid(), v.grid(), "expectation_energy");
  const std::size_t n = psi.size();
  std::vector<Complex> work(psi.values().begin(), psi.values().end());
  fourier_transform(n).forward(work);
  const auto k = psi.grid().wavenumbers();
  double kinetic = 0.0, weight = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::norm(work[i]);
    kinetic += p * k[i] * k[i];
    weight += p;
  }
  kinetic *= constants.hbar * constants.hbar / (2.0 * constants.mass) / weight;

  double potential = 0.0, norm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::norm(psi[i]);
    potential += p * v[i];
    norm2 += p;
  }
  return kinetic + potential / norm2;
}

}  // namespace ffst
