#include "ffst/core/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "ffst/core/errors.hpp"

namespace ffst {
namespace {

constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

constexpr std::size_t kStencil = 8;

// cell_weights[p][k] = int_p^{p+1} L_k(u) du for Lagrange basis on nodes 0..7.
std::array<std::array<double, kStencil>, kStencil - 1> make_cell_weights() {
  std::array<std::array<double, kStencil>, kStencil - 1> out{};
  for (std::size_t k = 0; k < kStencil; ++k) {
    // Expand L_k as polynomial coefficients (ascending powers).
    std::array<double, kStencil> c{};
    c[0] = 1.0;
    std::size_t degree = 0;
    double denom = 1.0;
    for (std::size_t j = 0; j < kStencil; ++j) {
      if (j == k) continue;
      const double root = static_cast<double>(j);
      for (std::size_t d = degree + 2; d-- > 0;) {
        const double lower = d > 0 ? c[d - 1] : 0.0;
        c[d] = lower - root * c[d];
      }
      ++degree;
      denom *= static_cast<double>(k) - root;
    }
    for (std::size_t p = 0; p + 1 < kStencil; ++p) {
      double s = 0.0;
      for (std::size_t d = 0; d < kStencil; ++d) {
        const double e = static_cast<double>(d + 1);
        s += c[d] * (std::pow(static_cast<double>(p + 1), e) - std::pow(static_cast<double>(p), e)) / e;
      }
      out[p][k] = s / denom;
    }
  }
  return out;
}

const auto& cell_weights() {
  static const auto w = make_cell_weights();
  return w;
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i)
    s += kGaussWeights[i] * f(mid + half * kGaussNodes[i]);
  return s * half;
}

std::vector<double> cumulative_integral(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < kStencil) throw InvalidArgument("cumulative_integral needs at least 8 samples");
  const auto& w = cell_weights();
  std::vector<double> out(n, 0.0);
  for (std::size_t a = 0; a + 1 < n; ++a) {
    const std::size_t start = std::min(a >= 3 ? a - 3 : 0, n - kStencil);
    const auto& cw = w[a - start];
    double cell = 0.0;
    for (std::size_t k = 0; k < kStencil; ++k) cell += cw[k] * f[start + k];
    out[a + 1] = out[a] + cell * h;
  }
  return out;
}

std::vector<double> cumulative_integral_from_right(std::span<const double> f, double h) {
  std::vector<double> reversed(f.rbegin(), f.rend());
  auto acc = cumulative_integral(reversed, h);
  std::reverse(acc.begin(), acc.end());
  return acc;
}

CubicStencil cubic_stencil(double pos, std::size_t count) {
  if (count < 4) throw InvalidArgument("cubic_stencil needs at least 4 samples");
  const double last = static_cast<double>(count - 1);
  pos = std::clamp(pos, 0.0, last);
  auto j = static_cast<std::size_t>(std::floor(pos));
  if (j >= count - 1) j = count - 1;
  CubicStencil s{};
  const double u = pos - static_cast<double>(j);
  if (u == 0.0) {
    const std::size_t base = std::min(j >= 1 ? j - 1 : 0, count - 4);
    for (std::size_t k = 0; k < 4; ++k) {
      s.index[k] = base + k;
      s.weight[k] = (base + k == j) ? 1.0 : 0.0;
    }
    return s;
  }
  const std::size_t base = std::min(j >= 1 ? j - 1 : 0, count - 4);
  const double t = pos - static_cast<double>(base);
  for (std::size_t k = 0; k < 4; ++k) {
    double wk = 1.0;
    for (std::size_t m = 0; m < 4; ++m) {
      if (m == k) continue;
      wk *= (t - static_cast<double>(m)) / (static_cast<double>(k) - static_cast<double>(m));
    }
    s.index[k] = base + k;
    s.weight[k] = wk;
  }
  return s;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw InvalidArgument("spline needs >= 2 matching samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw InvalidArgument("spline knots must be strictly increasing");
  m_.assign(n, 0.0);
  if (n == 2) return;
  // Thomas algorithm for the natural-spline moments.
  std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    const double lower = h0 / 6.0;
    diag[i] = (h0 + h1) / 3.0;
    upper[i] = h1 / 6.0;
    rhs[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
    if (i > 1) {
      const double factor = lower / diag[i - 1];
      diag[i] -= factor * upper[i - 1];
      rhs[i] -= factor * rhs[i - 1];
    }
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
    if (i == 1) break;
  }
}

std::size_t CubicSpline::segment(double t) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double CubicSpline::value(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h, b = (t - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h, b = (t - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         (-(3.0 * a * a - 1.0) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

double CubicSpline::second_derivative(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h, b = (t - x_[i]) / h;
  return a * m_[i] + b * m_[i + 1];
}

}  // namespace ffst
