#pragma once

// Archimedean pieces: v_k(beta) = int_U^{2U} e(beta u^k) du, the generating
// sums F_k and f_k at desk scale, and the singular integral J(N) as the value
// at N of the convolution of the pushforward densities of u -> u^k.

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <numeric>
#include <vector>

#include "wg/arith.hpp"
#include "wg/expsums.hpp"
#include "wg/interval.hpp"

namespace wg {

/// u ranges over (U, 2U]; the image of u -> u^k is (U^k, (2U)^k].
struct RangeSpec {
  unsigned k = 1;
  double U = 1.0;
  bool starred = false;

  /// U_k = N^{1/k} / k.
  static RangeSpec standard(unsigned k, double N) {
    if (k == 0) throw domain_error("RangeSpec: k must be >= 1");
    if (!(N > 0)) throw domain_error("RangeSpec: N must be > 0");
    return {k, std::pow(N, 1.0 / k) / k, false};
  }

  /// U_3^* = N^{5/18} / 3.
  static RangeSpec starred_cube(double N) {
    if (!(N > 0)) throw domain_error("RangeSpec: N must be > 0");
    return {3, std::pow(N, 5.0 / 18.0) / 3.0, true};
  }

  double image_lo() const { return std::pow(U, static_cast<double>(k)); }
  double image_hi() const { return std::pow(2 * U, static_cast<double>(k)); }
};

namespace detail {

struct GaussLegendre {
  std::vector<double> x, w;
};

// Nodes and weights on [-1, 1] by Newton iteration on P_n.
inline GaussLegendre gauss_legendre(unsigned n) {
  GaussLegendre g;
  g.x.resize(n);
  g.w.resize(n);
  for (unsigned i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (unsigned k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pm = n == 1 ? 1 : p0;
      dp = n * (x * pn - pm) / (x * x - 1);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.x[i] = x;
    g.w[i] = 2.0 / ((1 - x * x) * dp * dp);
  }
  return g;
}

inline const GaussLegendre& gl32() {
  static const GaussLegendre g = gauss_legendre(32);
  return g;
}

inline void legendre_values(double x, unsigned nmax, std::vector<double>& P) {
  P.assign(nmax + 1, 0.0);
  P[0] = 1;
  if (nmax >= 1) P[1] = x;
  for (unsigned k = 2; k <= nmax; ++k) P[k] = ((2.0 * k - 1) * x * P[k - 1] - (k - 1.0) * P[k - 2]) / k;
}

// j_n(w) for n = 0..nmax: upward recurrence when |w| > nmax, library otherwise.
inline void spherical_bessel(unsigned nmax, double w, std::vector<double>& j) {
  j.assign(nmax + 1, 0.0);
  const double x = std::abs(w);
  if (x > nmax + 1.0) {
    j[0] = std::sin(x) / x;
    if (nmax >= 1) j[1] = std::sin(x) / (x * x) - std::cos(x) / x;
    for (unsigned n = 2; n <= nmax; ++n) j[n] = (2.0 * n - 1) / x * j[n - 1] - j[n - 2];
  } else {
    for (unsigned n = 0; n <= nmax; ++n) j[n] = std::sph_bessel(n, x);
  }
  if (w < 0) {
    for (unsigned n = 1; n <= nmax; n += 2) j[n] = -j[n];
  }
}

inline double density(unsigned k, double t) {
  return std::pow(t, 1.0 / k - 1.0) / k;
}

}  // namespace detail

/// Oscillation budget |beta| (2U)^k.
inline constexpr double kOscillationBudget = 1e8;

/// v_k(beta) over the range, via t = u^k and Legendre-Filon panels in t.
inline ExpSumValue v_integral(const RangeSpec& range, double beta) {
  if (!(range.U > 0)) throw domain_error("v_integral: U must be > 0");
  const double a0 = range.image_lo(), b0 = range.image_hi();
  if (std::abs(beta) * b0 > kOscillationBudget) throw resource_error("v_integral: oscillation budget exceeded");
  ExpSumValue out;
  if (beta == 0.0) {
    out.value = range.U;
    out.abs_error = 4 * std::numeric_limits<double>::epsilon() * range.U;
    return out;
  }
  constexpr unsigned kDeg = 20;
  const auto& gl = detail::gl32();
  const double ratio = 1.1;
  const unsigned panels = std::max(1U, static_cast<unsigned>(std::ceil(std::log(b0 / a0) / std::log(ratio))));
  const double q = std::pow(b0 / a0, 1.0 / panels);
  std::complex<double> acc(0.0, 0.0);
  double err = 0.0;
  std::vector<double> P, j;
  std::vector<double> coef(kDeg + 1);
  double a = a0;
  for (unsigned i = 0; i < panels; ++i) {
    const double b = i + 1 == panels ? b0 : a * q;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::fill(coef.begin(), coef.end(), 0.0);
    for (std::size_t m = 0; m < gl.x.size(); ++m) {
      detail::legendre_values(gl.x[m], kDeg, P);
      const double f = detail::density(range.k, c + h * gl.x[m]) * gl.w[m];
      for (unsigned n = 0; n <= kDeg; ++n) coef[n] += f * P[n];
    }
    for (unsigned n = 0; n <= kDeg; ++n) coef[n] *= (2.0 * n + 1) / 2.0;
    const double omega = 2 * std::numbers::pi * beta * h;
    detail::spherical_bessel(kDeg, omega, j);
    std::complex<double> s(0.0, 0.0);
    const std::complex<double> I(0.0, 1.0);
    std::complex<double> ipow(1.0, 0.0);
    for (unsigned n = 0; n <= kDeg; ++n) {
      s += coef[n] * 2.0 * ipow * j[n];
      ipow *= I;
    }
    const double phase = 2 * std::numbers::pi * std::fmod(beta * c, 1.0);
    acc += h * std::polar(1.0, phase) * s;
    const double mass = h * 2.0 * std::abs(coef[0]);
    err += 2.0 * h * (std::abs(coef[kDeg]) + std::abs(coef[kDeg - 1])) +
           64 * std::numeric_limits<double>::epsilon() * (mass + std::abs(beta * c) * mass);
    a = b;
  }
  out.value = acc;
  out.abs_error = err;
  out.terms = panels;
  return out;
}

/// sum_{U < n <= 2U} e(alpha n^k), or with log p weights over primes.
inline ExpSumValue generating_sum(const RangeSpec& range, double alpha, bool prime_weighted) {
  if (!(range.U > 0)) throw domain_error("generating_sum: U must be > 0");
  if (2 * range.U > 1e8) throw resource_error("generating_sum: 2U must be <= 1e8");
  const u64 lo = static_cast<u64>(std::floor(range.U)) + 1;
  const u64 hi = static_cast<u64>(std::floor(2 * range.U));
  std::vector<u64> ns;
  if (prime_weighted) {
    if (hi >= 2) {
      for (u64 p : primes_up_to(hi)) {
        if (p >= lo) ns.push_back(p);
      }
    }
  } else {
    for (u64 n = lo; n <= hi; ++n) ns.push_back(n);
  }
  ExpSumValue out;
  std::complex<long double> acc(0.0L, 0.0L);
  double err = 0.0;
  const long double a = alpha;
  for (u64 n : ns) {
    long double nk = 1;
    for (unsigned i = 0; i < range.k; ++i) nk *= static_cast<long double>(n);
    const long double phase = a * nk - std::floor(a * nk);
    const long double w = prime_weighted ? std::log(static_cast<long double>(n)) : 1.0L;
    const long double ang = 2 * std::numbers::pi_v<long double> * phase;
    acc += w * std::complex<long double>(std::cos(ang), std::sin(ang));
    err += static_cast<double>(w) * (2 * std::numbers::pi * std::abs(alpha) * static_cast<double>(nk) *
                                         std::numeric_limits<long double>::epsilon() +
                                     4 * std::numeric_limits<double>::epsilon());
  }
  out.value = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  out.abs_error = err;
  out.terms = ns.size();
  return out;
}

/// Convolution of pushforward densities on the grid x_i = i h of [0, t_max].
class ConvolvedDensity {
 public:
  ConvolvedDensity(double t_max, std::size_t bins, std::vector<double> nodes, double support_lo,
                   double support_hi)
      : t_max_(t_max), h_(t_max / static_cast<double>(bins)), nodes_(std::move(nodes)),
        lo_(support_lo), hi_(support_hi) {}

  double spacing() const { return h_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }

  /// Density at t: linear interpolation of node weights / h, zero off the support.
  double at(double t) const {
    if (t <= lo_ || t >= hi_ || t < 0 || t > t_max_) return 0.0;
    const double x = t / h_;
    const std::size_t i = std::min(static_cast<std::size_t>(x), nodes_.size() - 2);
    const double f = x - static_cast<double>(i);
    return ((1 - f) * nodes_[i] + f * nodes_[i + 1]) / h_;
  }

 private:
  double t_max_, h_;
  std::vector<double> nodes_;
  double lo_, hi_;
};

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Mass m and mean of the density of u^k restricted to [a, b].
inline std::pair<double, double> piece_moments(unsigned k, double a, double b) {
  if (b / a < 1.5) {
    const auto& gl = gl32();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double m = 0, m1 = 0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      const double t = c + h * gl.x[i];
      const double w = gl.w[i] * h * density(k, t);
      m += w;
      m1 += w * (t - a);
    }
    return {m, a + m1 / m};
  }
  const double kk = k;
  const double m = std::pow(b, 1 / kk) - std::pow(a, 1 / kk);
  const double first = (std::pow(b, 1 + 1 / kk) - std::pow(a, 1 + 1 / kk)) / (kk + 1);
  return {m, first / m};
}

// Cloud-in-cell weights of one density on nodes 0..bins (t_max = bins * h).
inline std::vector<double> cic_weights(const RangeSpec& r, double h, std::size_t bins) {
  std::vector<double> w(bins + 1, 0.0);
  const double lo = r.image_lo(), hi = r.image_hi();
  if (hi > h * static_cast<double>(bins)) throw domain_error("convolved_density: range exceeds the grid");
  std::size_t i = static_cast<std::size_t>(lo / h);
  double a = lo;
  while (a < hi) {
    const double cell_end = static_cast<double>(i + 1) * h;
    const double b = std::min(hi, cell_end);
    if (b > a) {
      const auto [m, mean] = piece_moments(r.k, a, b);
      const double f = std::clamp((mean - static_cast<double>(i) * h) / h, 0.0, 1.0);
      w[i] += m * (1 - f);
      w[std::min(i + 1, bins)] += m * f;
    }
    a = b;
    ++i;
  }
  return w;
}

}  // namespace detail

/// Density of the sum of the given ranges' k-th powers on [0, t_max].
inline ConvolvedDensity convolved_density(const std::vector<RangeSpec>& ranges, double t_max,
                                          std::size_t bins) {
  if (ranges.empty()) throw domain_error("convolved_density: no ranges");
  if (bins < 16) throw domain_error("convolved_density: bins must be >= 16");
  if (bins > (std::size_t{1} << 26)) throw resource_error("convolved_density: too many bins");
  const double h = t_max / static_cast<double>(bins);
  double slo = 0, shi = 0;
  for (const auto& r : ranges) {
    slo += r.image_lo();
    shi += r.image_hi();
  }
  // cyclic length beyond the largest reachable node, so nothing wraps
  const std::size_t reach = static_cast<std::size_t>(shi / h) + ranges.size() + 2;
  const std::size_t len = std::max(bins + 1, reach + 1);
  const std::size_t nc = len / 2 + 1;
  std::vector<std::complex<double>> prod(nc, {1.0, 0.0});
  double* in = fftw_alloc_real(len);
  fftw_complex* out = fftw_alloc_complex(nc);
  fftw_plan fwd, bwd;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(len), in, out, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(static_cast<int>(len), out, in, FFTW_ESTIMATE);
  }
  for (const auto& r : ranges) {
    const std::size_t grid = std::max(bins, static_cast<std::size_t>(r.image_hi() / h) + 2);
    const auto w = detail::cic_weights(r, h, grid);
    std::fill(in, in + len, 0.0);
    std::copy(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(std::min(w.size(), len)), in);
    fftw_execute(fwd);
    for (std::size_t i = 0; i < nc; ++i) prod[i] *= std::complex<double>(out[i][0], out[i][1]);
  }
  for (std::size_t i = 0; i < nc; ++i) {
    out[i][0] = prod[i].real();
    out[i][1] = prod[i].imag();
  }
  fftw_execute(bwd);
  std::vector<double> nodes(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) nodes[i] = in[i] / static_cast<double>(len);
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  fftw_free(in);
  fftw_free(out);
  return {t_max, bins, std::move(nodes), slo, shi};
}

/// The seven ranges of J(N): square, two cubes, two starred cubes, fourth and b-th power.
inline std::vector<RangeSpec> singular_integral_ranges(double N, unsigned b) {
  return {RangeSpec::standard(2, N),  RangeSpec::standard(3, N), RangeSpec::standard(3, N),
          RangeSpec::starred_cube(N), RangeSpec::starred_cube(N), RangeSpec::standard(4, N),
          RangeSpec::standard(b, N)};
}

/// J(N) on [0, 2N] with the given number of bins; the enclosure is the
/// difference to the half-resolution grid plus rounding.
inline IntervalValue singular_integral_J(double N, unsigned b, std::size_t bins,
                                         std::array<int, 7> order = {0, 1, 2, 3, 4, 5, 6}) {
  if (!(N >= 1e5)) throw domain_error("singular_integral_J: N must be >= 1e5");
  if (b < 12 || b > 35) throw domain_error("singular_integral_J: b must lie in 12..35");
  if (bins < 1000) throw domain_error("singular_integral_J: bins must be >= 1000");
  const auto base = singular_integral_ranges(N, b);
  std::vector<RangeSpec> ranges;
  for (int i : order) ranges.push_back(base.at(static_cast<std::size_t>(i)));
  const double fine = convolved_density(ranges, 2 * N, bins).at(N);
  const double coarse = convolved_density(ranges, 2 * N, bins / 2).at(N);
  const double half = std::abs(fine - coarse) + 1e-12 * std::abs(fine);
  return {fine, fine - half, fine + half};
}

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of log-space residuals
};

/// Least squares of log y against log x.
inline PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw domain_error("fit_power_law: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw domain_error("fit_power_law: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  PowerLawFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::log(y[i]) - (f.intercept + f.slope * std::log(x[i]));
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

/// n log-spaced values in [lo, hi].
inline std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (n < 2 || !(lo > 0) || !(hi > lo)) throw domain_error("log_spaced: bad arguments");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return v;
}

/// Slope of log J(N) against log N.
inline PowerLawFit exponent_fit(unsigned b, const std::vector<double>& Ns, std::size_t bins) {
  if (Ns.size() < 5) throw domain_error("exponent_fit: need >= 5 points");
  std::vector<double> J;
  for (double N : Ns) {
    if (N < 1e6 || N > 1e12) throw domain_error("exponent_fit: N must lie in [1e6, 1e12]");
    J.push_back(singular_integral_J(N, b, bins).point);
  }
  return fit_power_law(Ns, J);
}

}  // namespace wg
