#pragma once

// Euler-product coefficients A(p,N), the truncated singular series with a
// certified tail enclosure, its d-twisted variant, and the sieve density
// omega(p) = p K(p,N) / L(p,N).

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "wg/arith.hpp"
#include "wg/detail/parallel.hpp"
#include "wg/expsums.hpp"
#include "wg/interval.hpp"
#include "wg/local_densities.hpp"

namespace wg {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline BigInt to_bigint(u128 v) {
  BigInt r = static_cast<u64>(v >> 64);
  r <<= 64;
  r += static_cast<u64>(v);
  return r;
}

inline long double to_long_double(const Rational& r) { return r.convert_to<long double>(); }

/// Largest prime whose Euler factor is evaluated exactly.
inline constexpr u64 kSeriesMaxPrime = 100'000;
/// Primes up to this bound enter the tail enclosure factor by factor.
inline constexpr u64 kSeriesTailPrimes = 1'000'000;
/// |A(p,N)| <= 100/p^2 holds from this prime on.
inline constexpr u64 kSeriesTailStart = 19;

namespace detail {

inline void check_b(unsigned b) {
  if (b < 12 || b > 35) throw domain_error("b must lie in 12..35");
}

inline void check_prime_arg(u64 p) {
  if (p > kSeriesMaxPrime) throw bounds_error("p must be <= 1e5");
  if (!is_prime(p)) throw domain_error("p must be prime");
}

inline const std::vector<u64>& tail_primes() {
  static const std::vector<u64> primes = primes_up_to(kSeriesTailPrimes);
  return primes;
}

/// Counts tables for every prime <= p_max, built in parallel and memoized.
inline void prefill_tables(u64 p_max, unsigned b) {
  const auto& primes = tail_primes();
  const auto end = std::upper_bound(primes.begin(), primes.end(), p_max);
  const std::size_t n = static_cast<std::size_t>(end - primes.begin());
  parallel_for(n, [&](std::size_t i) { local_count_table(primes[i], b); });
}

inline long double pow_ld(long double x, int e) {
  long double r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// 1 + A(p,N) = L(p,N)/(p-1)^6 in long double, one rounding per operation.
inline long double euler_factor_ld(u64 p, u64 N, unsigned b) {
  const auto t = local_count_table(p, b);
  return static_cast<long double>(t->L(N % p)) / pow_ld(static_cast<long double>(p - 1), 6);
}

inline long double twisted_factor_ld(u64 p, u64 N, unsigned b) {
  const auto t = local_count_table(p, b);
  return static_cast<long double>(p) * static_cast<long double>(t->K(N % p)) /
         pow_ld(static_cast<long double>(p - 1), 6);
}

// Encloses prod_{p > p_max} (1 + A(p,N)) given |A(p,N)| <= 100/p^2.
inline std::pair<long double, long double> tail_enclosure(u64 p_max) {
  long double lo = 1, hi = 1;
  std::size_t ops = 0;
  for (u64 p : tail_primes()) {
    if (p <= p_max) continue;
    const long double x = 100.0L / (static_cast<long double>(p) * p);
    lo *= 1 - x;
    hi *= 1 + x;
    ++ops;
  }
  // sum_{n > P} 100/n^2 < 100/P bounds the remaining primes
  const long double rest = 100.0L / static_cast<long double>(kSeriesTailPrimes);
  lo *= 1 - rest;
  hi *= std::exp(rest);
  const long double slack = 8.0L * (ops + 4) * std::numeric_limits<long double>::epsilon();
  return {lo * (1 - slack), hi * (1 + slack)};
}

inline IntervalValue series_with_tail(long double point, std::size_t factors, u64 p_max) {
  const long double rel = 4.0L * (factors + 1) * std::numeric_limits<long double>::epsilon();
  const auto [tlo, thi] = tail_enclosure(p_max);
  const long double lo = point * (1 - rel) * tlo;
  const long double hi = point * (1 + rel) * thi;
  return {static_cast<double>(point), static_cast<double>(std::min(lo, point)),
          static_cast<double>(std::max(hi, point))};
}

inline void check_series_args(u64 N, unsigned b, u64 p_max) {
  check_b(b);
  if (N == 0 || N % 2 == 0) throw domain_error("singular series: N must be odd");
  if (p_max < kSeriesTailStart) throw domain_error("singular series: p_max must be >= 19");
  if (p_max > kSeriesMaxPrime) throw bounds_error("singular series: p_max must be <= 1e5");
}

}  // namespace detail

/// A(p,N) = L(p,N)/(p-1)^6 - 1.
inline Rational A_coeff(u64 p, u64 N, unsigned b) {
  detail::check_b(b);
  detail::check_prime_arg(p);
  const BigInt L = to_bigint(local_count_table(p, b)->L(N % p));
  BigInt den = 1;
  for (int i = 0; i < 6; ++i) den *= (p - 1);
  return Rational(L, den) - 1;
}

/// B_d(q,N) = sum_{(a,q)=1} S_2(q,ad^2) S_3^*(q,a)^4 S_4^*(q,a) S_b^*(q,a) e(-aN/q).
inline ExpSumValue B_coeff(u64 q, u64 d, u64 N, unsigned b) {
  detail::check_b(b);
  if (q == 0 || d == 0) throw domain_error("B_coeff: q and d must be >= 1");
  if (q > 2000) throw bounds_error("B_coeff: q must be <= 2000");
  const auto h2 = power_residue_histogram(2, q, false);
  const auto h3 = power_residue_histogram(3, q, true);
  const auto h4 = power_residue_histogram(4, q, true);
  const auto hb = power_residue_histogram(b, q, true);
  const auto roots = detail::root_table(q);
  const u64 d2 = mulmod(d % q, d % q, q);
  const u64 nq = N % q;
  std::complex<double> acc(0.0, 0.0);
  double err = 0.0;
  u64 terms = 0;
  for (u64 a = 1; a <= q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    const u64 ar = a % q;
    const auto s2 = histogram_sum(*h2, static_cast<i64>(mulmod(ar, d2, q)));
    const auto s3 = histogram_sum(*h3, static_cast<i64>(ar));
    const auto s4 = histogram_sum(*h4, static_cast<i64>(ar));
    const auto sb = histogram_sum(*hb, static_cast<i64>(ar));
    const auto c3 = s3.value * s3.value;
    acc += s2.value * c3 * c3 * s4.value * sb.value * (*roots)[(q - mulmod(ar, nq, q)) % q];
    const double mag = (s2.abs() + s2.abs_error) * std::pow(s3.abs() + s3.abs_error, 4) *
                       (s4.abs() + s4.abs_error) * (sb.abs() + sb.abs_error);
    const double base = s2.abs() * std::pow(s3.abs(), 4) * s4.abs() * sb.abs();
    err += (mag - base) + mag * 16 * std::numeric_limits<double>::epsilon();
    ++terms;
  }
  ExpSumValue out;
  out.value = acc;
  out.abs_error = err;
  out.terms = terms;
  return out;
}

/// Truncated Euler product over p <= p_max with a certified enclosure of the tail.
inline IntervalValue singular_series(u64 N, unsigned b, u64 p_max) {
  detail::check_series_args(N, b, p_max);
  detail::prefill_tables(p_max, b);
  long double point = 1;
  std::size_t factors = 0;
  for (u64 p : detail::tail_primes()) {
    if (p > p_max) break;
    point *= detail::euler_factor_ld(p, N, b);
    ++factors;
  }
  return detail::series_with_tail(point, factors, p_max);
}

/// S_d(N): factors p K(p,N)/(p-1)^6 at p | d, 1 + A(p,N) elsewhere.
inline IntervalValue singular_series_d(u64 d, u64 N, unsigned b, u64 p_max) {
  detail::check_series_args(N, b, p_max);
  if (d == 0) throw domain_error("singular_series_d: d must be >= 1");
  const auto fd = factorize(d);
  if (!fd.squarefree()) throw domain_error("singular_series_d: d must be squarefree");
  if (d % 2 == 0) throw domain_error("singular_series_d: d must be odd");
  for (u64 p : fd.primes()) detail::check_prime_arg(p);
  detail::prefill_tables(p_max, b);
  long double point = 1;
  std::size_t factors = 0;
  for (u64 p : detail::tail_primes()) {
    if (p > p_max) break;
    point *= d % p == 0 ? detail::twisted_factor_ld(p, N, b) : detail::euler_factor_ld(p, N, b);
    ++factors;
  }
  for (u64 p : fd.primes()) {
    if (p <= p_max) continue;
    point *= detail::twisted_factor_ld(p, N, b) / detail::euler_factor_ld(p, N, b);
    factors += 2;
  }
  return detail::series_with_tail(point, factors, p_max);
}

/// omega(p) = p K(p,N) / L(p,N).
inline Rational omega_p(u64 p, u64 N, unsigned b) {
  detail::check_b(b);
  detail::check_prime_arg(p);
  const auto t = local_count_table(p, b);
  const u128 L = t->L(N % p);
  if (L == 0) throw consistency_error("omega_p: L(p,N) vanished");
  return Rational(to_bigint(t->K(N % p)) * p, to_bigint(L));
}

/// omega(d) = prod_{p | d} omega(p) for squarefree d.
inline Rational omega_d(u64 d, u64 N, unsigned b) {
  if (d == 0) throw domain_error("omega_d: d must be >= 1");
  const auto fd = factorize(d);
  if (!fd.squarefree()) throw domain_error("omega_d: d must be squarefree");
  Rational r = 1;
  for (u64 p : fd.primes()) r *= omega_p(p, N, b);
  return r;
}

/// omega(p) for the odd primes below z.
struct OmegaDensity {
  unsigned b = 0;
  u64 N = 0;
  std::vector<u64> primes;
  std::vector<Rational> omega;

  /// g(p) = omega(p)/p as doubles, aligned with primes.
  std::vector<double> relative() const {
    std::vector<double> g;
    g.reserve(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) {
      g.push_back(static_cast<double>(to_long_double(omega[i] / primes[i])));
    }
    return g;
  }

  Rational of(u64 d) const {
    Rational r = 1;
    for (u64 p : factorize(d).primes()) {
      auto it = std::lower_bound(primes.begin(), primes.end(), p);
      if (it == primes.end() || *it != p) throw domain_error("OmegaDensity: prime not stored");
      r *= omega[static_cast<std::size_t>(it - primes.begin())];
    }
    return r;
  }
};

inline OmegaDensity omega_density(u64 N, unsigned b, double z) {
  detail::check_b(b);
  if (!(z >= 3)) throw domain_error("omega_density: z must be >= 3");
  if (z > static_cast<double>(kSeriesMaxPrime) + 1) throw bounds_error("omega_density: z must be <= 1e5");
  OmegaDensity out;
  out.b = b;
  out.N = N;
  for (u64 p : detail::tail_primes()) {
    if (static_cast<double>(p) >= z) break;
    if (p == 2) continue;
    out.primes.push_back(p);
  }
  out.omega.resize(out.primes.size());
  detail::parallel_for(out.primes.size(),
                       [&](std::size_t i) { out.omega[i] = omega_p(out.primes[i], N, b); });
  return out;
}

/// V(z) = prod_{2 < p < z} (1 - omega(p)/p), accumulated in long double.
inline long double sieve_product_V(double z, u64 N, unsigned b) {
  const auto dens = omega_density(N, b, z);
  long double v = 1;
  for (std::size_t i = 0; i < dens.primes.size(); ++i) {
    v *= 1 - to_long_double(dens.omega[i] / dens.primes[i]);
  }
  return v;
}

}  // namespace wg
