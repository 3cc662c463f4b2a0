#include "ffst/sta/phase_equation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "ffst/core/errors.hpp"
#include "ffst/core/numerics.hpp"

namespace ffst::sta {
namespace {

// Four-point Lagrange value of `values` at fractional index pos.
double interpolate_at(std::span<const double> values, double pos) {
  const CubicStencil st = cubic_stencil(pos, values.size());
  double out = 0.0;
  for (std::size_t k = 0; k < 4; ++k) out += st.weight[k] * values[st.index[k]];
  return out;
}

// Refills g on (lo, hi) from the points just outside it: cubic through two
// samples per side when they exist, linear otherwise.
void bridge(std::vector<double>& g, std::size_t lo, std::size_t hi) {
  const std::size_t n = g.size();
  std::vector<std::size_t> knots;
  if (lo >= 1) knots.push_back(lo - 1);
  knots.push_back(lo);
  knots.push_back(hi);
  if (hi + 1 < n) knots.push_back(hi + 1);
  if (knots.size() < 4) knots = {lo, hi};
  for (std::size_t i = lo + 1; i < hi; ++i) {
    double value = 0.0;
    for (std::size_t a = 0; a < knots.size(); ++a) {
      double w = 1.0;
      for (std::size_t b = 0; b < knots.size(); ++b)
        if (b != a)
          w *= (static_cast<double>(i) - static_cast<double>(knots[b])) /
               (static_cast<double>(knots[a]) - static_cast<double>(knots[b]));
      value += w * g[knots[a]];
    }
    g[i] = value;
  }
}

}  // namespace

PhaseSolution solve_phase_equation(const Grid& grid, std::span<const double> phi,
                                   std::span<const double> phi_r, double r_rate,
                                   const PhysicalConstants& constants,
                                   const PhaseOptions& options, std::optional<std::size_t> anchor) {
  const std::size_t n = grid.size();
  if (phi.size() != n || phi_r.size() != n)
    throw InvalidArgument("phase equation inputs do not match the grid");
  if (!std::isfinite(r_rate)) throw InvalidArgument("dR/dt must be finite");
  if (!(options.node_guard >= options.node_threshold))
    throw InvalidArgument("node_guard must not be below node_threshold");
  const double dx = grid.dx();

  std::vector<double> density(n), source(n);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < n; ++i) {
    density[i] = phi[i] * phi[i];
    source[i] = phi[i] * phi_r[i];
    if (density[i] > density[peak]) peak = i;
  }
  if (!(density[peak] > 0.0)) throw InvalidArgument("phase equation on a null state");

  const auto from_left = cumulative_integral(source, dx);
  const auto from_right = cumulative_integral_from_right(source, dx);
  std::vector<double> running(n);
  double running_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    running[i] = i <= peak ? from_left[i] : -from_right[i];
    running_max = std::max(running_max, std::abs(running[i]));
  }

  PhaseSolution out;
  out.anchor = anchor.value_or(peak);
  if (out.anchor >= n) throw InvalidArgument("phase anchor outside the grid");
  out.valid.assign(n, 0);
  const double floor = options.node_threshold * density[peak];
  std::size_t first = n, last = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (density[i] >= floor) {
      out.valid[i] = 1;
      first = std::min(first, i);
      last = i;
    }

  // Nodes inside the support: sign changes between neighbours, or runs of
  // points too small to divide by.
  const double limit = options.singularity_tolerance * running_max;
  std::vector<std::size_t> nodes;  // grid index closest to each node
  auto check_node = [&](double pos) {
    const double at_node = interpolate_at(running, pos);
    if (std::abs(at_node) > limit) {
      const double x = grid.x_min() + pos * dx;
      throw NodeSingularity(
          fmt::format("additional phase diverges at the node x = {:.6g}: the source integral "
                      "there is {:.3g} (tolerance {:.3g})",
                      x, at_node, limit),
          x);
    }
    nodes.push_back(static_cast<std::size_t>(std::lround(pos)));
  };
  for (std::size_t i = first; i < last; ++i) {
    if (out.valid[i] && out.valid[i + 1] && phi[i] * phi[i + 1] < 0.0) {
      check_node(static_cast<double>(i) + phi[i] / (phi[i] - phi[i + 1]));
    } else if (out.valid[i] && !out.valid[i + 1]) {
      std::size_t j = i + 1, smallest = i + 1;
      for (; j <= last && !out.valid[j]; ++j)
        if (density[j] < density[smallest]) smallest = j;
      check_node(static_cast<double>(smallest));
      i = j - 1;
    }
  }

  const double scale = -2.0 * constants.mass / constants.hbar * r_rate;
  out.gradient.assign(n, 0.0);
  for (std::size_t i = first; i <= last; ++i)
    if (out.valid[i]) out.gradient[i] = scale * running[i] / density[i];

  // Interpolate across each node's low-density band. The band edges are the
  // nearest points on either side with density above the guard.
  const double guard = options.node_guard * density[peak];
  for (std::size_t node : nodes) {
    std::size_t lo = node, hi = node;
    while (lo > first && density[lo] < guard) --lo;
    while (hi < last && density[hi] < guard) ++hi;
    if (density[lo] < guard) lo = node;
    bridge(out.gradient, lo, hi);
  }
  for (std::size_t i = first; i <= last; ++i) {
    if (out.valid[i]) continue;
    std::size_t j = i;
    while (!out.valid[j]) ++j;
    const double a = out.gradient[i - 1], b = out.gradient[j];
    const double span = static_cast<double>(j - (i - 1));
    for (std::size_t k = i; k < j; ++k)
      out.gradient[k] = a + (b - a) * static_cast<double>(k - (i - 1)) / span;
    i = j;
  }
  for (std::size_t i = 0; i < first; ++i) out.gradient[i] = out.gradient[first];
  for (std::size_t i = last + 1; i < n; ++i) out.gradient[i] = out.gradient[last];

  // Integrate only across the support so the high-order rule never straddles
  // the kink where f' is frozen; beyond it f continues linearly.
  const auto inner = cumulative_integral(
      std::span<const double>(out.gradient).subspan(first, last - first + 1), dx);
  out.phase.assign(n, 0.0);
  std::copy(inner.begin(), inner.end(), out.phase.begin() + static_cast<std::ptrdiff_t>(first));
  for (std::size_t i = 0; i < first; ++i)
    out.phase[i] = out.phase[first] - static_cast<double>(first - i) * dx * out.gradient[first];
  for (std::size_t i = last + 1; i < n; ++i)
    out.phase[i] = out.phase[last] + static_cast<double>(i - last) * dx * out.gradient[last];
  const double offset = out.phase[out.anchor];
  for (double& f : out.phase) f -= offset;
  return out;
}

PhaseSolution solve_phase_equation(const EigenFamily& family, double r, double r_rate,
                                   const PhaseOptions& options, std::optional<std::size_t> anchor) {
  const auto phi = family.state(r);
  const auto phi_r = family.state_derivative(r);
  return solve_phase_equation(family.grid(), phi, phi_r, r_rate, family.constants(), options,
                              anchor);
}

}  // namespace ffst::sta
