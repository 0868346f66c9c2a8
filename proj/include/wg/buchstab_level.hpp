#pragma once

#include <algorithm>
#include <vector>

#include "wg/chebyshev.hpp"
#include "wg/errors.hpp"

namespace wg {

/// Piecewise Chebyshev interpolant of one level I_j of the iterated integral
/// on [j+1, upper]. Pointwise error is at most rel_error * I_j(T) + abs_error.
struct BuchstabLevel {
  unsigned level = 0;
  double upper = 0.0;
  std::vector<double> breaks;                 // panel endpoints, ascending
  std::vector<std::vector<double>> coeffs;    // antiderivative series per panel
  double rel_error = 0.0;
  double abs_error = 0.0;

  double lower() const { return level + 1.0; }

  double operator()(double T) const {
    if (T <= lower()) return 0.0;
    if (T > upper * (1 + 1e-15)) throw domain_error("BuchstabLevel: argument above the built range");
    auto it = std::upper_bound(breaks.begin(), breaks.end(), T);
    std::size_t k = it == breaks.begin() ? 0 : static_cast<std::size_t>(it - breaks.begin()) - 1;
    if (k >= coeffs.size()) k = coeffs.size() - 1;
    const double a = breaks[k], b = breaks[k + 1];
    const double t = std::clamp((2.0 * T - a - b) / (b - a), -1.0, 1.0);
    return cheb::eval(coeffs[k], t);
  }

  double error_bound(double value) const { return rel_error * value + abs_error; }
};

}  // namespace wg
