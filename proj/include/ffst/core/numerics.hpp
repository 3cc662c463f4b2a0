#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ffst {

/// 8-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree <= 15.
double gauss_legendre(const std::function<double(double)>& f, double a, double b);

/// Running integral I[i] = int_{x_0}^{x_i} f on a uniform grid of spacing h,
/// built from 8-point Lagrange interpolation on each cell (7th-order accurate).
/// Errors stay relative to the local size of f, which keeps rapidly decaying
/// tails accurate.
std::vector<double> cumulative_integral(std::span<const double> f, double h);

/// Running integral from the right end: I[i] = int_{x_i}^{x_{n-1}} f.
std::vector<double> cumulative_integral_from_right(std::span<const double> f, double h);

/// Four-point Lagrange interpolation stencil on equally spaced samples 0..count-1.
struct CubicStencil {
  std::array<std::size_t, 4> index;
  std::array<double, 4> weight;
};

/// Stencil for the fractional sample position pos in [0, count-1]. Nodes are
/// j-1..j+2 around j = floor(pos), shifted inward at the ends. Integer positions
/// yield a single unit weight, so sample values are reproduced bit-for-bit.
CubicStencil cubic_stencil(double pos, std::size_t count);

/// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  std::span<const double> knots() const noexcept { return x_; }

 private:
  std::size_t segment(double t) const;

  std::vector<double> x_, y_, m_;  // m_ = second derivatives at knots
};

}  // namespace ffst
