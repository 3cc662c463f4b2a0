#include "ffst/sta/eigen_family.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "ffst/core/eigensolver.hpp"
#include "ffst/core/errors.hpp"
#include "ffst/core/numerics.hpp"

namespace ffst::sta {
namespace {

constexpr std::size_t guard = 2;

double overlap(const std::vector<double>& a, const WaveFunction& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i].real();
  return s * b.grid().dx();
}

std::vector<double> interpolate(const std::vector<std::vector<double>>& rows, double pos) {
  const CubicStencil st = cubic_stencil(pos, rows.size());
  std::vector<double> out(rows.front().size(), 0.0);
  for (std::size_t k = 0; k < 4; ++k) {
    const double w = st.weight[k];
    if (w == 0.0) continue;
    const auto& row = rows[st.index[k]];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * row[i];
  }
  return out;
}

}  // namespace

std::shared_ptr<const EigenFamily> EigenFamily::build(const PotentialBuilder& builder, double r_min,
                                                      double r_max, int state_index,
                                                      const Grid& grid,
                                                      const PhysicalConstants& constants,
                                                      const FamilyOptions& options) {
  constants.validate();
  if (state_index < 0) throw InvalidArgument("state index must be >= 0");
  if (!(r_max >= r_min) || !std::isfinite(r_min) || !std::isfinite(r_max))
    throw InvalidArgument("family needs a finite R range with r_max >= r_min");
  double step = options.step.value_or((r_max - r_min) / 1000.0);
  if (r_max == r_min && !options.step) step = 1e-3 * std::max(1.0, std::abs(r_min));
  if (!(step > 0.0)) throw InvalidArgument("family R step must be positive");

  std::shared_ptr<EigenFamily> fam(new EigenFamily(grid));
  fam->constants_ = constants;
  fam->builder_ = builder;
  fam->index_ = state_index;
  fam->r_min_ = r_min;
  fam->r_max_ = r_max;
  // At least four interior samples so the four-point interpolation applies.
  const auto intervals = std::max<std::size_t>(
      3, static_cast<std::size_t>(std::ceil((r_max - r_min) / step - 1e-9)));
  fam->step_ = r_max > r_min ? std::min(step, (r_max - r_min) / static_cast<double>(intervals)) : step;

  const std::size_t count = intervals + 1 + 2 * guard;
  const int n = state_index;
  std::vector<std::vector<double>> neighbours;  // states n-1 and n+1 of the previous sample
  for (std::size_t j = 0; j < count; ++j) {
    const double r = r_min + (static_cast<double>(j) - static_cast<double>(guard)) * fam->step_;
    const PotentialField v = builder(r);
    require_same_grid(v.grid(), grid, "family potential");
    const auto states = solve_eigenstates(v, n + 2, constants);
    std::vector<double> phi(grid.size());
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = states[n].state[i].real();
    if (!fam->phi_.empty()) {
      const auto& prev = fam->phi_.back();
      const double self = overlap(prev, states[n].state);
      // The continuation of state n must dominate its overlap with the neighbours.
      for (int m = std::max(0, n - 1); m <= n + 1; ++m) {
        if (m == n) continue;
        if (std::abs(overlap(prev, states[m].state)) >= std::abs(self))
          throw LevelCrossing(
              fmt::format("eigenstate {} changes character between R = {:.9g} and R = {:.9g} "
                          "(near-degenerate levels {} and {})",
                          n, fam->r_.back(), r, std::min(n, m), std::max(n, m)),
              fam->r_.back(), r);
      }
      if (self < 0.0)
        for (double& p : phi) p = -p;
    }
    fam->r_.push_back(r);
    fam->phi_.push_back(std::move(phi));
    fam->energy_.push_back(states[n].energy);
  }

  // Fourth-order central differences on the interior samples.
  const double h = fam->step_;
  for (std::size_t j = guard; j + guard < count; ++j) {
    std::vector<double> d(grid.size());
    const auto &m2 = fam->phi_[j - 2], &m1 = fam->phi_[j - 1], &p1 = fam->phi_[j + 1],
               &p2 = fam->phi_[j + 2];
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h);
    fam->dphi_.push_back(std::move(d));
  }
  return fam;
}

double EigenFamily::position(double r) const {
  const double tol = 1e-9 * std::max(1.0, std::abs(r_max_ - r_min_));
  if (!(r >= r_min_ - tol && r <= r_max_ + tol))
    throw InvalidArgument(
        fmt::format("R = {:.12g} is outside the family range [{}, {}]", r, r_min_, r_max_));
  return std::clamp((r - r_min_) / step_, 0.0, static_cast<double>(dphi_.size() - 1));
}

std::vector<double> EigenFamily::state(double r) const {
  const double pos = position(r);
  const CubicStencil st = cubic_stencil(pos, dphi_.size());
  std::vector<double> out(grid_.size(), 0.0);
  for (std::size_t k = 0; k < 4; ++k) {
    const double w = st.weight[k];
    if (w == 0.0) continue;
    const auto& row = phi_[st.index[k] + guard];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * row[i];
  }
  return out;
}

std::vector<double> EigenFamily::state_derivative(double r) const {
  const double pos = position(r);
  return interpolate(dphi_, pos);
}

double EigenFamily::energy(double r) const {
  const double pos = position(r);
  const CubicStencil st = cubic_stencil(pos, dphi_.size());
  double e = 0.0;
  for (std::size_t k = 0; k < 4; ++k) e += st.weight[k] * energy_[st.index[k] + guard];
  return e;
}

WaveFunction EigenFamily::wavefunction(double r) const {
  const auto phi = state(r);
  std::vector<Complex> values(phi.begin(), phi.end());
  WaveFunction psi(grid_, std::move(values));
  psi.normalize();
  return psi;
}

}  // namespace ffst::sta
