#include "ffst/core/eigensolver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <fmt/core.h>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "ffst/core/errors.hpp"

namespace ffst {
namespace {

// Central 9-point second-derivative weights, offsets 0..4.
constexpr int kBand = 4;
constexpr std::array<double, kBand + 1> kLaplacian = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0,
                                                      8.0 / 315.0, -1.0 / 560.0};

class BandedHamiltonian {
 public:
  BandedHamiltonian(std::span<const double> v, double kinetic_scale)
      : v_(v.begin(), v.end()), scale_(kinetic_scale) {}

  std::size_t size() const { return v_.size(); }

  double element(std::size_t i, std::size_t j) const {
    const std::size_t off = i > j ? i - j : j - i;
    if (off > kBand) return 0.0;
    const double t = -scale_ * kLaplacian[off];
    return i == j ? t + v_[i] : t;
  }

  void apply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      double s = (v_[i] - scale_ * kLaplacian[0]) * x[i];
      for (std::size_t o = 1; o <= kBand; ++o) {
        const double c = -scale_ * kLaplacian[o];
        if (i >= o) s += c * x[i - o];
        if (i + o < n) s += c * x[i + o];
      }
      y[i] = s;
    }
  }

  double magnitude() const {
    double vmax = 0.0;
    for (double v : v_) vmax = std::max(vmax, std::abs(v));
    return vmax + 6.0 * scale_;
  }

  /// Solves (H - shift) y = rhs in place; returns false on an exactly singular pivot.
  bool shifted_solve(double shift, std::vector<double>& rhs) const {
    const auto n = static_cast<lapack_int>(size());
    const lapack_int kl = kBand, ku = kBand, ldab = 2 * kl + ku + 1;
    std::vector<double> ab(static_cast<std::size_t>(ldab) * size(), 0.0);
    for (lapack_int j = 0; j < n; ++j) {
      const lapack_int lo = std::max<lapack_int>(0, j - ku);
      const lapack_int hi = std::min<lapack_int>(n - 1, j + kl);
      for (lapack_int i = lo; i <= hi; ++i) {
        double a = element(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (i == j) a -= shift;
        ab[static_cast<std::size_t>(kl + ku + i - j + j * ldab)] = a;
      }
    }
    std::vector<lapack_int> ipiv(size());
    const lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, n, kl, ku, 1, ab.data(), ldab,
                                          ipiv.data(), rhs.data(), n);
    if (info < 0) throw Error("dgbsv rejected its arguments");
    return info == 0;
  }

 private:
  std::vector<double> v_;
  double scale_;  // hbar^2 / (2 m dx^2)
};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void unit_euclidean(std::vector<double>& x) {
  const double n = std::sqrt(dot(x, x));
  for (auto& v : x) v /= n;
}

// Rayleigh-quotient iteration from a tridiagonal seed. Returns the refined
// energy, or nullopt when it wandered off to a neighbouring level.
std::optional<double> refine(const BandedHamiltonian& h, std::vector<double>& x, double seed,
                             double window) {
  const double scale = h.magnitude();
  std::vector<double> hx(x.size());
  double energy = seed;
  for (int iter = 0; iter < 8; ++iter) {
    std::vector<double> y = x;
    double shift = energy;
    if (!h.shifted_solve(shift, y)) {
      shift += 1e-13 * scale;
      y = x;
      if (!h.shifted_solve(shift, y)) throw NumericalError("eigensolver: singular shift");
    }
    unit_euclidean(y);
    h.apply(y, hx);
    const double next = dot(y, hx);
    x = std::move(y);
    const bool done = std::abs(next - energy) <= 1e-14 * scale && iter > 0;
    energy = next;
    if (done) break;
  }
  if (std::abs(energy - seed) > window) return std::nullopt;
  return energy;
}

// Direct symmetric band solve for the lowest `count` states. Slower than the
// refinement path but immune to near-degenerate seeds.
void solve_direct(const BandedHamiltonian& h, int count, std::vector<double>& energies,
                  std::vector<std::vector<double>>& vectors) {
  const auto n = static_cast<lapack_int>(h.size());
  const lapack_int ldab = kBand + 1;
  std::vector<double> ab(static_cast<std::size_t>(ldab) * h.size());
  for (lapack_int j = 0; j < n; ++j)
    for (lapack_int i = j; i <= std::min<lapack_int>(n - 1, j + kBand); ++i)
      ab[static_cast<std::size_t>(i - j + j * ldab)] =
          h.element(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  std::vector<double> q(h.size() * h.size()), w(h.size()),
      z(h.size() * static_cast<std::size_t>(count));
  std::vector<lapack_int> ifail(h.size());
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, kBand, ab.data(),
                                         ldab, q.data(), n, 0.0, 0.0, 1, count, 0.0, &found,
                                         w.data(), z.data(), n, ifail.data());
  if (info != 0 || found != count) throw NumericalError("eigensolver: dsbevx failed");
  energies.assign(w.begin(), w.begin() + count);
  vectors.clear();
  for (int s = 0; s < count; ++s)
    vectors.emplace_back(z.begin() + static_cast<std::ptrdiff_t>(s) * n,
                         z.begin() + static_cast<std::ptrdiff_t>(s + 1) * n);
}

}  // namespace

void fix_sign_gauge(WaveFunction& phi) {
  double peak = 0.0;
  for (const auto& v : phi.values()) peak = std::max(peak, std::abs(v.real()));
  for (auto& v : phi.values()) {
    if (std::abs(v.real()) >= 1e-2 * peak) {
      if (v.real() < 0.0)
        for (auto& w : phi.values()) w = -w;
      return;
    }
  }
}

std::vector<Eigenstate> solve_eigenstates(const PotentialField& v, int n_states,
                                          const PhysicalConstants& constants) {
  constants.validate();
  if (n_states < 1) throw InvalidArgument("solve_eigenstates: n_states must be >= 1");
  v.require_finite("solve_eigenstates");
  const Grid& grid = v.grid();
  const std::size_t n = grid.size();
  if (static_cast<std::size_t>(n_states) + 1 >= n)
    throw InvalidArgument("solve_eigenstates: more states requested than grid points");

  const double dx = grid.dx();
  const double kscale = constants.hbar * constants.hbar / (2.0 * constants.mass * dx * dx);

  // Seed: 3-point tridiagonal problem, one extra state for gap estimates.
  const auto want = static_cast<lapack_int>(n_states + 1);
  std::vector<double> d(n), e(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = 2.0 * kscale + v[i];
    e[i] = -kscale;
  }
  std::vector<double> w(n), z(n * static_cast<std::size_t>(want));
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(want));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', static_cast<lapack_int>(n),
                                         d.data(), e.data(), 0.0, 0.0, 1, want, 0.0, &found,
                                         w.data(), z.data(), static_cast<lapack_int>(n),
                                         support.data());
  if (info != 0 || found != want) throw NumericalError("eigensolver: dstevr failed");

  const BandedHamiltonian h(v.values(), kscale);
  std::vector<double> energies;
  std::vector<std::vector<double>> vectors;
  for (int s = 0; s < n_states; ++s) {
    const auto idx = static_cast<std::size_t>(s);
    double gap = w[idx + 1] - w[idx];
    if (s > 0) gap = std::min(gap, w[idx] - w[idx - 1]);
    std::vector<double> x(z.begin() + static_cast<std::ptrdiff_t>(idx * n),
                          z.begin() + static_cast<std::ptrdiff_t>((idx + 1) * n));
    const auto energy = refine(h, x, w[idx], 0.3 * gap);
    if (!energy) {
      solve_direct(h, n_states, energies, vectors);
      break;
    }
    for (const auto& lower : vectors) {
      const double c = dot(lower, x);
      for (std::size_t i = 0; i < n; ++i) x[i] -= c * lower[i];
    }
    unit_euclidean(x);
    energies.push_back(*energy);
    vectors.push_back(std::move(x));
  }

  std::vector<Eigenstate> out;
  out.reserve(static_cast<std::size_t>(n_states));
  const double edge = std::min(v[0], v[n - 1]);
  for (int s = 0; s < n_states; ++s) {
    const double energy = energies[static_cast<std::size_t>(s)];
    if (!(edge > energy))
      throw NonConfining(fmt::format(
          "state {} (E = {:.6g}) is not bound: boundary potential is only {:.6g}", s, energy,
          edge));
    const auto& x = vectors[static_cast<std::size_t>(s)];
    WaveFunction phi(grid);
    const double inv = 1.0 / std::sqrt(dx);
    for (std::size_t i = 0; i < n; ++i) phi[i] = Complex{x[i] * inv, 0.0};
    fix_sign_gauge(phi);
    out.push_back({energy, std::move(phi)});
  }
  for (std::size_t s = 1; s < out.size(); ++s) {
    if (!(out[s].energy > out[s - 1].energy))
      throw NumericalError("eigensolver: energies are not strictly ascending");
  }
  return out;
}

}  // namespace ffst
