#include "ffst/core/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "ffst/core/errors.hpp"

namespace ffst {

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar))
    throw InvalidArgument(fmt::format("constants.hbar must be positive, got {}", hbar));
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw InvalidArgument(fmt::format("constants.mass must be positive, got {}", mass));
}

Grid::Grid(std::size_t n_points, double x_min, double x_max) {
  if (n_points < 16 || !std::has_single_bit(n_points))
    throw InvalidArgument(
        fmt::format("grid.n_points must be a power of two >= 16, got {}", n_points));
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min))
    throw InvalidArgument(
        fmt::format("grid interval is degenerate: x_min={} x_max={}", x_min, x_max));

  auto d = std::make_shared<Data>();
  d->n = n_points;
  d->x_min = x_min;
  d->x_max = x_max;
  d->dx = (x_max - x_min) / static_cast<double>(n_points);
  d->x.resize(n_points);
  d->k.resize(n_points);
  const double dk = 2.0 * std::numbers::pi / (x_max - x_min);
  const auto half = static_cast<std::ptrdiff_t>(n_points / 2);
  for (std::size_t i = 0; i < n_points; ++i) {
    d->x[i] = x_min + static_cast<double>(i) * d->dx;
    auto m = static_cast<std::ptrdiff_t>(i);
    if (m >= half) m -= static_cast<std::ptrdiff_t>(n_points);
    d->k[i] = dk * static_cast<double>(m);
  }
  data_ = std::move(d);
}

std::size_t Grid::nearest_index(double position) const noexcept {
  const double s = std::round((position - x_min()) / dx());
  if (s <= 0.0) return 0;
  return std::min(size() - 1, static_cast<std::size_t>(s));
}

bool Grid::operator==(const Grid& other) const noexcept {
  if (data_ == other.data_) return true;
  return size() == other.size() && x_min() == other.x_min() && x_max() == other.x_max();
}

Grid make_grid(std::size_t n_points, double x_min, double x_max) {
  return Grid(n_points, x_min, x_max);
}

void require_same_grid(const Grid& a, const Grid& b, const char* context) {
  if (!(a == b))
    throw InvalidArgument(fmt::format("{}: grid mismatch ({} points on [{}, {}] vs {} on [{}, {}])",
                                      context, a.size(), a.x_min(), a.x_max(), b.size(),
                                      b.x_min(), b.x_max()));
}

}  // namespace ffst
