#pragma once

// Chebyshev series on an interval [a, b]: interpolation at first-kind points,
// Clenshaw evaluation, and spectral antiderivatives.

#include <cmath>
#include <numbers>
#include <vector>

namespace wg::cheb {

/// Coefficients c_0..c_n of sum c_k T_k(t) interpolating f(x(t)) at the n+1
/// first-kind points, x(t) = (a+b)/2 + t (b-a)/2.
template <class F>
std::vector<double> fit(F&& f, double a, double b, unsigned n) {
  const unsigned m = n + 1;
  std::vector<double> values(m);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (unsigned k = 0; k < m; ++k) {
    const double t = std::cos(std::numbers::pi * (k + 0.5) / m);
    values[k] = f(mid + half * t);
  }
  std::vector<double> c(m, 0.0);
  for (unsigned j = 0; j < m; ++j) {
    double s = 0.0;
    for (unsigned k = 0; k < m; ++k) s += values[k] * std::cos(std::numbers::pi * j * (k + 0.5) / m);
    c[j] = 2.0 * s / m;
  }
  c[0] *= 0.5;
  return c;
}

inline double eval(const std::vector<double>& c, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

/// Coefficients of t -> (half) * integral_{-1}^{t} of the series, one degree higher.
inline std::vector<double> antiderivative(const std::vector<double>& c, double half) {
  const std::size_t n = c.size();
  auto at = [&](std::size_t k) { return k < n ? c[k] : 0.0; };
  std::vector<double> g(n + 1, 0.0);
  if (n > 0) g[1] = at(0) - 0.5 * at(2);
  for (std::size_t k = 2; k <= n; ++k) g[k] = (at(k - 1) - at(k + 1)) / (2.0 * k);
  double at_minus_one = 0.0;
  for (std::size_t k = 1; k <= n; ++k) at_minus_one += (k % 2 == 0 ? 1.0 : -1.0) * g[k];
  g[0] = -at_minus_one;
  for (double& v : g) v *= half;
  return g;
}

/// integral_{-1}^{1} of the series, times half.
inline double definite(const std::vector<double>& c, double half) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); k += 2) s += c[k] * 2.0 / (1.0 - static_cast<double>(k * k));
  return s * half;
}

/// Magnitude of the last two coefficients: the usual truncation indicator.
inline double tail(const std::vector<double>& c) {
  const std::size_t n = c.size();
  if (n < 2) return std::abs(c.back());
  return std::abs(c[n - 1]) + std::abs(c[n - 2]);
}

}  // namespace wg::cheb
