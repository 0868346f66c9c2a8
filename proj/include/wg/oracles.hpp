#pragma once

// Brute-force and identity oracles, kept independent of the primary routes
// they check, plus the suites behind `wg verify`.

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "wg/archimedean.hpp"
#include "wg/arith.hpp"
#include "wg/buchstab.hpp"
#include "wg/expsums.hpp"
#include "wg/local_densities.hpp"
#include "wg/rosser.hpp"
#include "wg/singular_series.hpp"

namespace wg {

struct OracleReport {
  std::string name;
  std::size_t cases = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  double wall_seconds = 0.0;

  std::string json_line() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["cases"] = cases;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", max_deviation);
    j["max_deviation"] = buf;
    std::snprintf(buf, sizeof buf, "%.12g", tolerance);
    j["tolerance"] = buf;
    j["pass"] = pass;
    std::snprintf(buf, sizeof buf, "%.3f", wall_seconds);
    j["wall_seconds"] = buf;
    return j.dump();
  }
};

/// Literal 6- or 7-fold loop over 1 <= x, u_j <= q; counts for every residue.
inline std::vector<u64> brute_congruence_counts(u64 q, unsigned b, CountVariant variant) {
  if (q == 0) throw domain_error("brute_congruence_count: q must be >= 1");
  if (q > 13) throw resource_error("brute_congruence_count: q must be <= 13");
  std::vector<u64> units;
  for (u64 u = 1; u <= q; ++u) {
    if (std::gcd(u, q) == 1) units.push_back(u);
  }
  auto pw = [q](u64 u, u64 k) { return powmod(u % q, k, q); };
  std::vector<u64> xs;
  if (variant != CountVariant::K) {
    for (u64 x = 1; x <= q; ++x) {
      if (variant == CountVariant::L || std::gcd(x, q) == 1) xs.push_back(pw(x, 2));
    }
  } else {
    xs.push_back(0);
  }
  std::vector<u64> c3, c4, cb;
  for (u64 u : units) {
    c3.push_back(pw(u, 3));
    c4.push_back(pw(u, 4));
    cb.push_back(pw(u, b));
  }
  std::vector<u64> counts(q, 0);
  for (u64 x2 : xs)
    for (u64 a1 : c3)
      for (u64 a2 : c3)
        for (u64 a3 : c3)
          for (u64 a4 : c3) {
            const u64 s4 = x2 + a1 + a2 + a3 + a4;
            for (u64 a5 : c4)
              for (u64 a6 : cb) ++counts[(s4 + a5 + a6) % q];
          }
  return counts;
}

inline u64 brute_congruence_count(u64 q, u64 n_res, unsigned b, CountVariant variant) {
  const auto c = brute_congruence_counts(q, b, variant);
  return c.at(n_res % q);
}

/// x^2 + u1^3 + ... + u6^b == N (mod q), x unrestricted, u_j units, for any q.
inline u128 histogram_convolution_count(u64 q, u64 N, unsigned b) {
  if (q == 0) throw domain_error("histogram_convolution_count: q must be >= 1");
  if (q > 100'000) throw bounds_error("histogram_convolution_count: q must be <= 1e5");
  auto f = detail::to_dense(*power_residue_histogram(2, q, false));
  for (u64 k : {u64{3}, u64{3}, u64{3}, u64{3}, u64{4}, u64{b}}) {
    f = detail::cyclic_convolve(f, power_residue_histogram(k, q, true)->support());
  }
  return f[N % q];
}

/// |(1/q) sum_{a=1}^{q} S_2 S_3^{*4} S_4^* S_b^* e(-aN/q) - count|.
inline double orthogonality_check(u64 q, u64 N, unsigned b) {
  if (q == 0) throw domain_error("orthogonality_check: q must be >= 1");
  if (q > 120) throw bounds_error("orthogonality_check: q must be <= 120");
  const auto s2 = histogram_sums_all(*power_residue_histogram(2, q, false));
  const auto s3 = histogram_sums_all(*power_residue_histogram(3, q, true));
  const auto s4 = histogram_sums_all(*power_residue_histogram(4, q, true));
  const auto sb = histogram_sums_all(*power_residue_histogram(b, q, true));
  const auto roots = detail::root_table(q);
  std::complex<double> acc(0.0, 0.0);
  for (u64 a = 0; a < q; ++a) {
    const auto c3 = s3[a] * s3[a];
    acc += s2[a] * c3 * c3 * s4[a] * sb[a] * (*roots)[(q - a * (N % q) % q) % q];
  }
  acc /= static_cast<double>(q);
  return std::abs(acc - static_cast<double>(histogram_convolution_count(q, N, b)));
}

struct NrPrimeSum {
  double sum = 0.0;
  double prediction = 0.0;
  double ratio = 0.0;
  std::size_t terms = 0;
};

/// sum over l = p_1...p_{r-1}, z <= p_1 <= ... <= p_{r-1}, p_1...p_{r-2} p_{r-1}^2 <= 2U,
/// of 1/(l log(U/l)), against I_{r-2}(log U/log z - 1)/log U.
inline NrPrimeSum nr_prime_sum(unsigned r, double U, double z, double tol = 1e-9) {
  if (r < 3) throw domain_error("nr_prime_sum: r must be >= 3");
  if (!(U >= 2) || U > 1e8) throw domain_error("nr_prime_sum: U must lie in [2, 1e8]");
  if (!(z >= 20)) throw domain_error("nr_prime_sum: z must be >= 20");
  NrPrimeSum out;
  const double two_u = 2 * U;
  if (std::pow(z, r - 1.0) > two_u) return out;
  const double pmax = std::sqrt(two_u / std::pow(z, r - 2.0));
  std::vector<u64> ps;
  for (u64 p : primes_up_to(static_cast<u64>(pmax) + 1)) {
    if (static_cast<double>(p) >= z) ps.push_back(p);
  }
  std::uint64_t nodes = 0;
  long double total = 0;
  std::function<void(std::size_t, std::size_t, long double)> rec = [&](std::size_t depth, std::size_t start,
                                                                      long double prod) {
    if (depth == r - 1) {
      total += 1.0L / (prod * std::log(static_cast<long double>(U) / prod));
      ++out.terms;
      return;
    }
    const std::size_t remaining = r - 1 - depth;
    for (std::size_t i = start; i < ps.size(); ++i) {
      if (++nodes > 100'000'000) throw resource_error("nr_prime_sum: enumeration exceeds 1e8 nodes");
      const long double p = static_cast<long double>(ps[i]);
      // smallest completion: all remaining primes equal p, the last one squared
      if (prod * std::pow(p, static_cast<long double>(remaining + 1)) > two_u) break;
      rec(depth + 1, i, prod * p);
    }
  };
  rec(0, 0, 1.0L);
  out.sum = static_cast<double>(total);
  const double s = std::log(U) / std::log(z) - 1.0;
  out.prediction = iterated_integral(r, s, tol).point / std::log(U);
  out.ratio = out.prediction > 0 ? out.sum / out.prediction : 0.0;
  return out;
}

/// n1^3+n2^3+n3^3 = m1^3+m2^3+m3^3 with n1, m1 in the cube range and the rest in
/// the starred range: sum of squared representation counts.
inline u64 cube_meanvalue_count(double N) {
  if (!(N >= 1) || N > 1e8) throw domain_error("cube_meanvalue_count: N must lie in [1, 1e8]");
  const auto r1 = RangeSpec::standard(3, N);
  const auto r2 = RangeSpec::starred_cube(N);
  auto ints = [](const RangeSpec& r) {
    std::vector<u64> v;
    for (u64 n = static_cast<u64>(std::floor(r.U)) + 1; static_cast<double>(n) <= 2 * r.U; ++n) v.push_back(n);
    return v;
  };
  const auto a = ints(r1), c = ints(r2);
  const std::size_t total = a.size() * c.size() * c.size();
  if (total > 200'000'000) throw resource_error("cube_meanvalue_count: memory budget exceeded");
  std::vector<u64> sums;
  sums.reserve(total);
  for (u64 x : a)
    for (u64 y : c)
      for (u64 w : c) sums.push_back(x * x * x + y * y * y + w * w * w);
  std::sort(sums.begin(), sums.end());
  u64 count = 0;
  for (std::size_t i = 0; i < sums.size();) {
    std::size_t j = i;
    while (j < sums.size() && sums[j] == sums[i]) ++j;
    const u64 m = j - i;
    count += m * m;
    i = j;
  }
  return count;
}

/// |range_1| (2 |range_2|^2 - |range_2|): solutions with n1 = m1 and {n2,n3} = {m2,m3}.
inline u64 cube_meanvalue_diagonal(double N) {
  auto len = [](const RangeSpec& r) {
    return static_cast<u64>(std::floor(2 * r.U) - std::floor(r.U));
  };
  const u64 a = len(RangeSpec::standard(3, N)), c = len(RangeSpec::starred_cube(N));
  return a * (2 * c * c - c);
}

/// I_{r-2}(s) by nested Gauss-Legendre in the variables x with t = L (T/L)^x.
inline double tensor_iterated_integral(unsigned r, double s, unsigned nodes = 40) {
  if (r < 3) throw domain_error("tensor_iterated_integral: r must be >= 3");
  if (r > 7) throw resource_error("tensor_iterated_integral: dimension too large");
  const auto gl = detail::gauss_legendre(nodes);
  std::function<double(unsigned, double)> level = [&](unsigned j, double T) -> double {
    const double lo = j + 1.0;
    if (T <= lo) return 0.0;
    const double L = std::log(T / lo);
    double acc = 0;
    for (unsigned i = 0; i < nodes; ++i) {
      const double x = 0.5 * (gl.x[i] + 1);
      const double u = lo * std::exp(L * x);
      // integrand(u) * du/dx = integrand(u) * u * L, and integrand = g(u)/u
      const double g = j == 1 ? std::log(u - 1) : level(j - 1, u - 1);
      acc += 0.5 * gl.w[i] * g * L;
    }
    return acc;
  };
  return level(r - 2, s);
}

/// J(N) by sampling the six non-square variables and integrating the square
/// variable exactly: J = vol * E[ 1/(2 sqrt t) ; t = N - S in (U_2^2, 4 U_2^2] ].
inline IntervalValue monte_carlo_J(double N, unsigned b, std::size_t samples, std::uint64_t seed) {
  if (samples < 100) throw domain_error("monte_carlo_J: need >= 100 samples");
  const auto ranges = singular_integral_ranges(N, b);
  const RangeSpec& sq = ranges[0];
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double volume = 1;
  for (std::size_t i = 1; i < ranges.size(); ++i) volume *= ranges[i].U;
  const double tlo = sq.image_lo(), thi = sq.image_hi();
  long double sum = 0, sum2 = 0;
  for (std::size_t n = 0; n < samples; ++n) {
    double S = 0;
    for (std::size_t i = 1; i < ranges.size(); ++i) {
      const double u = ranges[i].U * (1 + unit(rng));
      S += std::pow(u, static_cast<double>(ranges[i].k));
    }
    const double t = N - S;
    const double v = (t > tlo && t <= thi) ? 0.5 / std::sqrt(t) : 0.0;
    sum += v;
    sum2 += static_cast<long double>(v) * v;
  }
  const double mean = static_cast<double>(sum / samples);
  const double var = std::max(0.0, static_cast<double>(sum2 / samples) - mean * mean);
  const double se = std::sqrt(var / static_cast<double>(samples));
  return {volume * mean, volume * (mean - 4 * se), volume * (mean + 4 * se)};
}

namespace detail {

class SuiteTimer {
 public:
  SuiteTimer(OracleReport& r, std::vector<OracleReport>& out)
      : report_(r), out_(out), start_(std::chrono::steady_clock::now()) {}
  ~SuiteTimer() {
    report_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    out_.push_back(report_);
  }

 private:
  OracleReport& report_;
  std::vector<OracleReport>& out_;
  std::chrono::steady_clock::time_point start_;
};

inline void note(OracleReport& r, double deviation) {
  ++r.cases;
  if (!(deviation <= r.tolerance)) r.pass = false;
  if (std::isnan(deviation)) {
    r.max_deviation = deviation;
  } else if (!std::isnan(r.max_deviation)) {
    r.max_deviation = std::max(r.max_deviation, deviation);
  }
}

inline std::vector<OracleReport> local_suite() {
  std::vector<OracleReport> out;
  {
    OracleReport r{"local.brute_vs_counts", 0, 0, 0, true, 0};
    SuiteTimer t(r, out);
    for (u64 p : {2, 3, 5, 7, 11, 13}) {
      for (unsigned b : {12u, 18u, 24u, 35u}) {
        const auto table = local_count_table(p, b);
        const auto L = brute_congruence_counts(p, b, CountVariant::L);
        const auto K = brute_congruence_counts(p, b, CountVariant::K);
        const auto Ls = brute_congruence_counts(p, b, CountVariant::Lstar);
        for (u64 n = 0; n < p; ++n) {
          const bool same = table->L(n) == L[n] && table->K(n) == K[n] && table->Lstar(n) == Ls[n];
          note(r, same ? 0.0 : 1.0);
        }
      }
    }
  }
  {
    OracleReport r{"local.routes_agree", 0, 0, 0, true, 0};
    SuiteTimer t(r, out);
    for (u64 p : primes_up_to(400)) {
      if (p == 2) continue;
      for (unsigned b : {12u, 13u, 24u, 35u}) {
        const auto A = route::by_convolution(p, b);
        const auto B = route::by_gauss_periods(p, b);
        for (u64 n = 0; n < p; ++n) {
          const bool same = A.L(n) == B.L(n) && A.K(n) == B.K(n) && A.Lstar(n) == B.Lstar(n);
          note(r, same ? 0.0 : 1.0);
        }
      }
    }
  }
  {
    OracleReport r{"local.orthogonality", 0, 0, 1e-6, true, 0};
    SuiteTimer t(r, out);
    std::mt19937_64 rng(20240601);
    for (u64 q = 1; q <= 120; ++q) {
      if (q > 1 && !factorize(q).squarefree()) continue;
      for (int i = 0; i < 5; ++i) {
        const u64 N = rng() % 1'000'000'000;
        note(r, orthogonality_check(q, N, 12 + static_cast<unsigned>(rng() % 24)) / std::pow(q, 6.0));
      }
    }
  }
  return out;
}

inline std::vector<OracleReport> series_suite() {
  std::vector<OracleReport> out;
  {
    OracleReport r{"series.A_two_routes", 0, 0, 1e-8, true, 0};
    SuiteTimer t(r, out);
    for (u64 p : primes_up_to(200)) {
      for (unsigned b : {12u, 35u}) {
        const u64 N = 1'000'003 + 2 * p;
        const double a = static_cast<double>(to_long_double(A_coeff(p, N, b)));
        const auto B = B_coeff(p, 1, N, b);
        const double via_b = B.real() / (static_cast<double>(p) * std::pow(p - 1.0, 6));
        note(r, std::abs(a - via_b) / std::max(1.0, std::abs(a)));
      }
    }
  }
  {
    OracleReport r{"series.prime_power_vanishing", 0, 0, 1e-6, true, 0};
    SuiteTimer t(r, out);
    for (u64 p : {2, 3, 5, 7}) {
      for (u64 q = p * p; q <= 1000; q *= p) {
        const auto B = B_coeff(q, 1, 1'000'001, 12);
        note(r, B.abs() / (static_cast<double>(q) * std::pow(static_cast<double>(euler_phi(q)), 6)));
      }
    }
  }
  {
    OracleReport r{"series.tail_enclosure", 0, 0, 0, true, 0};
    SuiteTimer t(r, out);
    for (u64 N : {1'000'001ULL, 123'456'789ULL, 999'999'999'999ULL}) {
      const auto coarse = singular_series(N, 12, 1000);
      const auto fine = singular_series(N, 12, 10000);
      note(r, coarse.contains(fine.point) && coarse.overlaps(fine) && coarse.lo > 0 ? 0.0 : 1.0);
    }
  }
  {
    OracleReport r{"series.omega_ratio", 0, 0, 1e-8, true, 0};
    SuiteTimer t(r, out);
    for (u64 d : {3ULL, 15ULL, 105ULL, 1155ULL}) {
      const u64 N = 1'000'001;
      const double ratio = singular_series_d(d, N, 12, 1000).point / singular_series(N, 12, 1000).point;
      const double w = static_cast<double>(to_long_double(omega_d(d, N, 12)));
      note(r, std::abs(ratio - w) / std::max(1.0, w));
    }
  }
  return out;
}

inline std::vector<OracleReport> rosser_suite() {
  std::vector<OracleReport> out;
  {
    OracleReport r{"rosser.fundamental_inequality", 0, 0, 0, true, 0};
    SuiteTimer t(r, out);
    const std::vector<u64> ps = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (double D : {1e2, 1e4, 1e6}) {
      for (std::size_t mask = 0; mask < (std::size_t{1} << ps.size()); ++mask) {
        u64 n = 1;
        for (std::size_t i = 0; i < ps.size(); ++i) {
          if (mask >> i & 1U) n *= ps[i];
        }
        try {
          fundamental_check(n, D, 40);
          note(r, 0.0);
        } catch (const consistency_error&) {
          note(r, 1.0);
        }
      }
    }
  }
  {
    OracleReport r{"rosser.sandwich_random", 0, 0, 1e-12, true, 0};
    SuiteTimer t(r, out);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto dens = SieveDensity::random(300, seed);
      const long double V = dens.product();
      const long double lo = sifted_sum(Sign::Lower, dens, 300, 1e7);
      const long double hi = sifted_sum(Sign::Upper, dens, 300, 1e7);
      note(r, static_cast<double>(std::max<long double>({0.0L, lo - V, V - hi})));
    }
  }
  return out;
}

inline std::vector<OracleReport> buchstab_suite() {
  std::vector<OracleReport> out;
  {
    OracleReport r{"buchstab.tensor_vs_levels", 0, 0, 1e-4, true, 0};
    SuiteTimer t(r, out);
    for (unsigned b : {12u, 24u, 35u}) {
      for (unsigned rr : {3u, 4u, 5u}) {
        const double lv = c_r(rr, b, 1e-9).point;
        const double tn = tensor_iterated_integral(rr, budget(b).s(), 40);
        note(r, std::abs(lv - tn) / std::abs(tn));
      }
    }
  }
  {
    OracleReport r{"buchstab.prime_sum_ratio", 0, 0, 0.3, true, 0};
    SuiteTimer t(r, out);
    note(r, std::abs(nr_prime_sum(3, 1e7, 30).ratio - 1));
    note(r, std::abs(nr_prime_sum(4, 1e8, 25).ratio - 1));
  }
  return out;
}

inline std::vector<OracleReport> archimedean_suite() {
  std::vector<OracleReport> out;
  {
    OracleReport r{"archimedean.v_vs_trapezoid", 0, 0, 1e-8, true, 0};
    SuiteTimer t(r, out);
    for (double N : {1e6, 1e9}) {
      const auto range = RangeSpec::standard(2, N);
      const double beta = 1 / N;
      const auto v = v_integral(range, beta);
      const std::size_t n = 1'000'000;
      const double a = range.U, h = range.U / n;
      std::complex<double> s(0.0, 0.0);
      for (std::size_t i = 0; i <= n; ++i) {
        const double u = a + h * static_cast<double>(i);
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        s += w * std::polar(1.0, 2 * std::numbers::pi * std::fmod(beta * u * u, 1.0));
      }
      s *= h;
      note(r, std::abs(v.value - s) / std::abs(s));
    }
  }
  {
    OracleReport r{"archimedean.J_vs_monte_carlo", 0, 0, 0.01, true, 0};
    SuiteTimer t(r, out);
    const double J = singular_integral_J(1e9, 12, 1 << 18).point;
    const auto mc = monte_carlo_J(1e9, 12, 2'000'000, 7);
    note(r, std::abs(J - mc.point) / J);
  }
  return out;
}

}  // namespace detail

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"local", "series", "rosser", "buchstab", "archimedean"};
  return names;
}

/// Runs one named suite or "all".
inline std::vector<OracleReport> run_suite(const std::string& name) {
  if (name == "all") {
    std::vector<OracleReport> all;
    for (const auto& n : suite_names()) {
      auto part = run_suite(n);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  if (name == "local") return detail::local_suite();
  if (name == "series") return detail::series_suite();
  if (name == "rosser") return detail::rosser_suite();
  if (name == "buchstab") return detail::buchstab_suite();
  if (name == "archimedean") return detail::archimedean_suite();
  throw domain_error("run_suite: unknown suite '" + name + "'");
}

}  // namespace wg
