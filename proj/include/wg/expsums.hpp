#pragma once

// Complete exponential sums S_k(q,a), unit sums S_k^*(q,a) and character sums
// G_k(chi,a), all evaluated through power-residue histograms.

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>
#include <vector>

#include "wg/arith.hpp"

namespace wg {

/// A complex sum together with a bound on its accumulated rounding error.
struct ExpSumValue {
  std::complex<double> value{0.0, 0.0};
  double abs_error = 0.0;
  u64 terms = 0;

  double abs() const { return std::abs(value); }
  double real() const { return value.real(); }
  double imag() const { return value.imag(); }
};

/// e(r/q) for r in [0, q). Filled by repeated multiplication with the primitive
/// root, re-anchored to a directly evaluated value every kAnchor steps.
class RootTable {
 public:
  static constexpr u64 kAnchor = 64;

  explicit RootTable(u64 q) : q_(q), roots_(q) {
    const long double two_pi_over_q = 2.0L * std::numbers::pi_v<long double> / q;
    const std::complex<double> step(static_cast<double>(std::cos(two_pi_over_q)),
                                    static_cast<double>(std::sin(two_pi_over_q)));
    std::complex<double> z(1.0, 0.0);
    for (u64 r = 0; r < q; ++r) {
      if (r % kAnchor == 0) {
        const long double angle = two_pi_over_q * static_cast<long double>(r);
        z = {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
      }
      roots_[r] = z;
      z *= step;
    }
  }

  u64 modulus() const { return q_; }
  const std::complex<double>& operator[](u64 r) const { return roots_[r]; }

  /// Worst-case error of a single entry.
  static double entry_error() { return 4.0 * kAnchor * std::numeric_limits<double>::epsilon(); }

 private:
  u64 q_;
  std::vector<std::complex<double>> roots_;
};

namespace detail {

inline std::shared_ptr<const RootTable> root_table(u64 q) {
  static Memo<u64, RootTable> memo;
  if (q > kHistogramCacheMaxModulus) return std::make_shared<const RootTable>(q);
  return memo.get_or_make(q, [q] { return RootTable(q); });
}

inline void check_modulus(u64 q) {
  if (q == 0) throw domain_error("exponential sum: modulus must be >= 1");
  if (q > kHistogramMaxModulus) throw bounds_error("exponential sum: modulus must be <= 1e7");
}

}  // namespace detail

/// sum_r counts[r] e(a r / q).
inline ExpSumValue histogram_sum(const ResidueHistogram& h, i64 a) {
  const u64 q = h.modulus;
  const auto roots = detail::root_table(q);
  const u64 ar = reduce_mod(a, q);
  ExpSumValue out;
  std::complex<double> acc(0.0, 0.0);
  u64 weight = 0;
  for (u64 r = 0; r < q; ++r) {
    const u64 c = h.counts[r];
    if (c == 0) continue;
    acc += static_cast<double>(c) * (*roots)[mulmod(ar, r, q)];
    weight += c;
  }
  out.value = acc;
  out.terms = weight;
  out.abs_error = static_cast<double>(weight) *
                  (RootTable::entry_error() + 4.0 * std::numeric_limits<double>::epsilon());
  return out;
}

/// S(a) for every a in [0, q): one pass over the histogram support per a.
inline std::vector<std::complex<double>> histogram_sums_all(const ResidueHistogram& h) {
  const u64 q = h.modulus;
  const auto roots = detail::root_table(q);
  const auto support = h.support();
  std::vector<std::complex<double>> out(q);
  for (u64 a = 0; a < q; ++a) {
    std::complex<double> acc(0.0, 0.0);
    for (const auto& [r, c] : support) acc += static_cast<double>(c) * (*roots)[a * r % q];
    out[a] = acc;
  }
  return out;
}

/// S_k(q,a) = sum_{n=1}^{q} e(a n^k / q).
inline ExpSumValue complete_sum(u64 k, u64 q, i64 a) {
  detail::check_modulus(q);
  return histogram_sum(*power_residue_histogram(k, q, false), a);
}

/// S_k^*(q,a): the same sum over n coprime to q.
inline ExpSumValue unit_sum(u64 k, u64 q, i64 a) {
  detail::check_modulus(q);
  return histogram_sum(*power_residue_histogram(k, q, true), a);
}

/// G_k(chi,a) = sum_{n=1}^{p} chi(n) e(a n^k / p) for a character modulo p.
inline ExpSumValue character_sum(u64 k, const DirichletCharacter& chi, i64 a) {
  const u64 p = chi.modulus();
  const u64 ar = reduce_mod(a, p);
  if (ar == 0) throw domain_error("character_sum: a must be coprime to the modulus");
  const auto roots = detail::root_table(p - 1);
  const auto add_roots = detail::root_table(p);
  std::complex<double> acc(0.0, 0.0);
  for (u64 n = 1; n < p; ++n) {
    acc += (*roots)[chi.exponent(n)] * (*add_roots)[mulmod(ar, powmod(n, k, p), p)];
  }
  ExpSumValue out;
  out.value = acc;
  out.terms = p - 1;
  out.abs_error = static_cast<double>(p - 1) * 3.0 * RootTable::entry_error();
  return out;
}

/// Checked overload: the character must belong to the stated modulus.
inline ExpSumValue character_sum(u64 k, u64 p, const DirichletCharacter& chi, i64 a) {
  if (chi.modulus() != p) throw domain_error("character_sum: character modulus mismatch");
  return character_sum(k, chi, a);
}

/// gamma(p) such that S_k^*(p^l, a) = 0 for every l >= gamma(p) and (a,p) = 1.
inline unsigned gamma_cutoff(u64 k, u64 p) {
  if (k == 0) throw domain_error("gamma_cutoff: k must be >= 1");
  if (!is_prime(p)) throw domain_error("gamma_cutoff: p must be prime");
  unsigned theta = 0;
  for (u64 m = k; m % p == 0; m /= p) ++theta;
  if (p == 2 && theta > 0) return theta + 3;
  return theta + 2;
}

}  // namespace wg
