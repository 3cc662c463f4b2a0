#include "ffst/speed/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "ffst/core/errors.hpp"

namespace ffst::speed {

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::remainder(a, two_pi);
  return a <= -std::numbers::pi ? a + two_pi : a;
}

void freeze_invalid(std::span<double> field, std::span<const std::uint8_t> valid) {
  const std::size_t n = field.size();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> left(n, none), right(n, none);
  std::size_t last = none;
  for (std::size_t i = 0; i < n; ++i) {
    if (valid[i]) last = i;
    left[i] = last;
  }
  last = none;
  for (std::size_t i = n; i-- > 0;) {
    if (valid[i]) last = i;
    right[i] = last;
  }
  if (left[n - 1] == none) throw NodeDominated("no valid points to freeze against");
  for (std::size_t i = 0; i < n; ++i) {
    if (valid[i]) continue;
    const std::size_t l = left[i], r = right[i];
    std::size_t pick = l;
    if (l == none) pick = r;
    else if (r != none && r - i < i - l) pick = r;
    field[i] = field[pick];
  }
}

PhaseField extract_phase(const WaveFunction& psi, double node_threshold) {
  const std::size_t n = psi.size();
  PhaseField out;
  out.amplitude = psi.amplitude();
  out.phase.assign(n, 0.0);
  out.valid.assign(n, 0);

  std::size_t anchor = 0;
  double total = 0.0, invalid = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = out.amplitude[i];
    total += a * a;
    if (a > out.amplitude[anchor]) anchor = i;
    if (a >= node_threshold) out.valid[i] = 1;
    else invalid += a * a;
  }
  if (!(total > 0.0)) throw NodeDominated("phase extraction on a null state");
  out.invalid_mass = invalid / total;
  if (out.invalid_mass > 0.2)
    throw NodeDominated(fmt::format(
        "{:.1f}% of the probability lies below the node threshold {:.3g}",
        100.0 * out.invalid_mass, node_threshold));

  const auto values = psi.values();
  out.phase[anchor] = std::arg(values[anchor]);
  std::size_t prev = anchor;
  for (std::size_t i = anchor + 1; i < n; ++i) {
    if (!out.valid[i]) continue;
    out.phase[i] = out.phase[prev] + wrap_angle(std::arg(values[i]) - std::arg(values[prev]));
    prev = i;
  }
  prev = anchor;
  for (std::size_t i = anchor; i-- > 0;) {
    if (!out.valid[i]) continue;
    out.phase[i] = out.phase[prev] + wrap_angle(std::arg(values[i]) - std::arg(values[prev]));
    prev = i;
  }
  freeze_invalid(out.phase, out.valid);
  return out;
}

}  // namespace ffst::speed
