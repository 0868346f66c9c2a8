#pragma once

// Exact counts of the local congruences
//
//   K:  u1^3+u2^3+u3^3+u4^3+u5^4+u6^b        == N (mod p), all u_j units
//   L*: x^2 + (same six terms)               == N (mod p), x and u_j units
//   L:  x^2 + (same six terms)               == N (mod p), x unrestricted
//
// Two exact routes are provided. by_convolution convolves residue histograms
// (O(p^2)); by_gauss_periods evaluates the finite Fourier expansion of the
// counts in F_l for two primes l == 1 (mod p), where the character sums
// collapse to Gaussian periods of order D = gcd(lcm(2,3,4,b), p-1), and
// recombines the residues by CRT. Both return every residue class of N at once.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <complex>
#include <memory>
#include <numeric>
#include <tuple>
#include <vector>

#include "wg/arith.hpp"
#include "wg/expsums.hpp"

namespace wg {

enum class CountVariant { L, K, Lstar };

/// Counts for every residue of N modulo a prime p, for one exponent class of b.
class LocalCountTable {
 public:
  LocalCountTable() = default;

  u64 prime() const { return p_; }
  u64 exponent() const { return b_; }
  /// 0 for a dense table, otherwise the coset order D of the class table.
  u64 class_order() const { return order_; }

  /// One residue from each class on which the counts are constant.
  std::vector<u64> representatives() const {
    std::vector<u64> reps;
    if (order_ == 0) {
      for (u64 n = 0; n < p_; ++n) reps.push_back(n);
      return reps;
    }
    reps.assign(order_ + 1, 0);
    u64 x = 1;
    for (u64 m = 0; m < order_; ++m) {
      reps[1 + m] = x;
      x = x * generator_ % p_;
    }
    return reps;
  }

  u128 L(u64 n_res) const { return L_[index(n_res)]; }
  u128 K(u64 n_res) const { return K_[index(n_res)]; }
  u128 Lstar(u64 n_res) const { return Lstar_[index(n_res)]; }
  u128 count(CountVariant v, u64 n_res) const {
    switch (v) {
      case CountVariant::L: return L(n_res);
      case CountVariant::K: return K(n_res);
      case CountVariant::Lstar: return Lstar(n_res);
    }
    return 0;
  }

  static LocalCountTable dense(u64 p, u64 b, std::vector<u128> L, std::vector<u128> K,
                               std::vector<u128> Lstar) {
    LocalCountTable t;
    t.p_ = p;
    t.b_ = b;
    t.L_ = std::move(L);
    t.K_ = std::move(K);
    t.Lstar_ = std::move(Lstar);
    return t;
  }

  // Entry 0 is N == 0; entry 1+m is the coset g^m H_D.
  static LocalCountTable by_class(u64 p, u64 b, u64 order, u64 generator, std::vector<u128> L,
                                  std::vector<u128> K, std::vector<u128> Lstar) {
    LocalCountTable t = dense(p, b, std::move(L), std::move(K), std::move(Lstar));
    t.order_ = order;
    t.power_ = (p - 1) / order;
    t.generator_ = generator;
    const u64 zeta = powmod(generator, t.power_, p);
    u64 y = 1;
    for (u64 m = 0; m < order; ++m) {
      t.coset_roots_.emplace_back(y, m);
      y = y * zeta % p;
    }
    std::sort(t.coset_roots_.begin(), t.coset_roots_.end());
    return t;
  }

 private:
  std::size_t index(u64 n_res) const {
    n_res %= p_;
    if (order_ == 0) return n_res;
    if (n_res == 0) return 0;
    const u64 y = powmod(n_res, power_, p_);
    auto it = std::lower_bound(coset_roots_.begin(), coset_roots_.end(), std::make_pair(y, u64{0}));
    return 1 + it->second;
  }

  u64 p_ = 2;
  u64 b_ = 1;
  u64 order_ = 0;
  u64 power_ = 1;
  u64 generator_ = 1;
  std::vector<std::pair<u64, u64>> coset_roots_;
  std::vector<u128> L_, K_, Lstar_;
};

namespace detail {

inline void check_local_args(u64 p, u64 n_res, unsigned b) {
  if (p > 100'000) throw bounds_error("local densities: p must be <= 1e5");
  if (!is_prime(p)) throw domain_error("local densities: p must be prime");
  if (n_res >= p) throw domain_error("local densities: n_res must lie in [0, p)");
  if (b < 12 || b > 35) throw domain_error("local densities: b must lie in 12..35");
}

// f * h over Z/pZ with h given by its support.
inline std::vector<u128> cyclic_convolve(const std::vector<u128>& f,
                                         const std::vector<std::pair<u64, u64>>& h) {
  const u64 p = f.size();
  std::vector<u128> g(p, 0);
  for (const auto& [r, c] : h) {
    const u128 cc = c;
    for (u64 i = 0; i + r < p; ++i) g[i + r] += f[i] * cc;
    for (u64 i = p - r; i < p && r != 0; ++i) g[i + r - p] += f[i] * cc;
  }
  return g;
}

inline std::vector<u128> to_dense(const ResidueHistogram& h) {
  return {h.counts.begin(), h.counts.end()};
}

// Montgomery arithmetic modulo an odd l < 2^62.
struct Montgomery {
  u64 mod = 0;
  u64 neg_inv = 0;  // -mod^{-1} mod 2^64
  u64 r2 = 0;       // 2^128 mod mod

  explicit Montgomery(u64 m) : mod(m) {
    u64 inv = m;
    for (int i = 0; i < 6; ++i) inv *= 2 - m * inv;
    neg_inv = ~inv + 1;
    const u128 r = (static_cast<u128>(1) << 64) % m;
    r2 = static_cast<u64>(r * r % m);
  }
  u64 reduce(u128 t) const {
    const u64 q = static_cast<u64>(t) * neg_inv;
    const u64 res = static_cast<u64>((t + static_cast<u128>(q) * mod) >> 64);
    return res >= mod ? res - mod : res;
  }
  u64 to(u64 x) const { return reduce(static_cast<u128>(x % mod) * r2); }
  u64 from(u64 x) const { return reduce(x); }
  u64 mul(u64 a, u64 b) const { return reduce(static_cast<u128>(a) * b); }
  u64 add(u64 a, u64 b) const {
    const u64 s = a + b;
    return s >= mod ? s - mod : s;
  }
  u64 pow(u64 a, u64 e) const {
    u64 r = to(1);
    while (e != 0) {
      if (e & 1U) r = mul(r, a);
      a = mul(a, a);
      e >>= 1U;
    }
    return r;
  }
};

// Two distinct primes l == 1 (mod p) just below 2^62; their product exceeds
// p^7 for every p <= 1e5.
inline std::array<u64, 2> fourier_moduli(u64 p) {
  std::array<u64, 2> out{};
  std::size_t found = 0;
  for (u64 k = ((u64{1} << 62) - 1) / p; found < 2; --k) {
    const u64 l = k * p + 1;
    if (is_prime(l)) out[found++] = l;
  }
  return out;
}

// slot[x] = ind_g(x) mod D for units x; slot[0] is unused.
inline std::vector<std::uint32_t> coset_slots(u64 p, u64 g, u64 D) {
  std::vector<std::uint32_t> slot(p, 0);
  const double inv_p = 1.0 / static_cast<double>(p);
  u64 x = 1;
  std::uint32_t c = 0;
  for (u64 j = 0; j + 1 < p; ++j) {
    slot[x] = c;
    if (++c == D) c = 0;
    // x*g < 2^34, so the double quotient is off by at most one
    const u64 xg = x * g;
    i64 r = static_cast<i64>(xg - static_cast<u64>(static_cast<double>(xg) * inv_p) * p);
    if (r < 0) r += static_cast<i64>(p);
    if (r >= static_cast<i64>(p)) r -= static_cast<i64>(p);
    x = static_cast<u64>(r);
  }
  return slot;
}

// eta[i] = sum of zeta^x over the coset g^i H_D, zeta of order p in F_l
// (Montgomery form).
inline std::vector<u64> gaussian_periods(u64 p, u64 D, const std::vector<std::uint32_t>& slot,
                                         const Montgomery& mg) {
  const u64 l = mg.mod;
  u64 zeta = 0;
  for (u64 h = 2;; ++h) {
    zeta = mg.pow(mg.to(h), (l - 1) / p);
    if (mg.from(zeta) != 1) break;
  }
  std::vector<u64> eta(D, 0);
  constexpr u64 kStreams = 4;
  std::array<u64, kStreams> z{};
  z[0] = zeta;
  for (u64 i = 1; i < kStreams; ++i) z[i] = mg.mul(z[i - 1], zeta);
  const u64 step = z[kStreams - 1];
  u64 x = 1;
  for (; x + kStreams <= p; x += kStreams) {
    for (u64 i = 0; i < kStreams; ++i) {
      u64& e = eta[slot[x + i]];
      e = mg.add(e, z[i]);
      z[i] = mg.mul(z[i], step);
    }
  }
  for (u64 i = 0; x < p; ++x, ++i) {
    u64& e = eta[slot[x]];
    e = mg.add(e, z[i]);
  }
  return eta;
}

// Periods of order dividing lcm(1..35) for both CRT moduli, shared by every b.
struct PeriodBasis {
  u64 p = 0;
  u64 g = 0;
  u64 order = 0;
  std::array<u64, 2> moduli{};
  std::array<std::vector<u64>, 2> eta;
};

inline constexpr u64 kLcmUpTo35 = 144'403'552'893'600ULL;

inline std::shared_ptr<const PeriodBasis> period_basis(u64 p) {
  static Memo<u64, PeriodBasis> memo;
  return memo.get_or_make(p, [p] {
    PeriodBasis pb;
    pb.p = p;
    pb.g = primitive_root(p);
    pb.order = std::gcd(p - 1, kLcmUpTo35);
    pb.moduli = fourier_moduli(p);
    const auto slot = coset_slots(p, pb.g, pb.order);
    for (std::size_t i = 0; i < 2; ++i) {
      pb.eta[i] = gaussian_periods(p, pb.order, slot, Montgomery(pb.moduli[i]));
    }
    return pb;
  });
}

// Coarsens periods of order F to order D | F.
inline std::vector<u64> coarsen_periods(const std::vector<u64>& fine, u64 D,
                                        const Montgomery& mg) {
  std::vector<u64> eta(D, 0);
  for (u64 c = 0; c < fine.size(); ++c) eta[c % D] = mg.add(eta[c % D], fine[c]);
  return eta;
}

// Counts modulo l for every class of N (index 0: N == 0, index 1+m: coset m),
// from the periods eta of order D.
inline std::array<std::vector<u64>, 3> period_counts_mod(u64 p, u64 b, u64 D,
                                                         const Montgomery& mg,
                                                         const std::vector<u64>& eta) {
  const u64 l = mg.mod;
  auto unit_sum_by_coset = [&](u64 k) {
    const u64 d = std::gcd(k, p - 1);
    const u64 md = mg.to(d);
    std::vector<u64> s(D, 0);
    for (u64 c = 0; c < D; ++c) {
      u64 acc = 0;
      for (u64 t = 0; t < D; t += d) acc = mg.add(acc, eta[(c + t) % D]);
      s[c] = mg.mul(md, acc);
    }
    return s;
  };
  const auto s2 = unit_sum_by_coset(2);
  const auto s3 = unit_sum_by_coset(3);
  const auto s4 = unit_sum_by_coset(4);
  const auto sb = unit_sum_by_coset(b);
  const u64 one = mg.to(1);

  std::vector<u64> prodK(D), prodLs(D), prodL(D);
  for (u64 c = 0; c < D; ++c) {
    u64 cube2 = mg.mul(s3[c], s3[c]);
    u64 v = mg.mul(mg.mul(cube2, cube2), mg.mul(s4[c], sb[c]));
    prodK[c] = v;
    prodLs[c] = mg.mul(v, s2[c]);
    prodL[c] = mg.mul(v, mg.add(s2[c], one));
  }

  const u64 pm1 = mg.to(p - 1);
  const u64 pm1_6 = mg.pow(pm1, 6);
  const std::array<u64, 3> zero_term{pm1_6, mg.mul(pm1_6, pm1), mg.mul(pm1_6, mg.to(p))};
  const std::array<const std::vector<u64>*, 3> prods{&prodK, &prodLs, &prodL};
  const u64 inv_p = mg.pow(mg.to(p), l - 2);
  const u64 coset_size = mg.to((p - 1) / D);
  const u64 shift_minus_one = ((p - 1) / 2) % D;

  std::array<std::vector<u64>, 3> out;
  for (std::size_t v = 0; v < 3; ++v) {
    const auto& pr = *prods[v];
    out[v].assign(D + 1, 0);
    u64 total = 0;
    for (u64 c = 0; c < D; ++c) total = mg.add(total, pr[c]);
    out[v][0] = mg.from(mg.mul(inv_p, mg.add(zero_term[v], mg.mul(coset_size, total))));
    for (u64 m = 0; m < D; ++m) {
      const u64 s = (m + shift_minus_one) % D;
      u64 acc = zero_term[v];
      for (u64 c = 0; c < D; ++c) acc = mg.add(acc, mg.mul(pr[c], eta[(c + s) % D]));
      out[v][1 + m] = mg.from(mg.mul(inv_p, acc));
    }
  }
  return out;
}

inline u128 crt2(u64 r1, u64 l1, u64 r2, u64 l2) {
  const u64 inv = powmod(l1 % l2, l2 - 2, l2);
  const u64 diff = r2 >= r1 % l2 ? r2 - r1 % l2 : r2 + l2 - r1 % l2;
  const u64 t = mulmod(diff, inv, l2);
  return static_cast<u128>(r1) + static_cast<u128>(l1) * t;
}

inline u64 effective_unit_exponent(u64 b, u64 p) {
  const u64 cls = b % (p - 1);
  return cls == 0 ? p - 1 : cls;
}

}  // namespace detail

namespace route {

inline LocalCountTable by_convolution(u64 p, u64 b) {
  static detail::Memo<u64, std::vector<u128>> base_memo;
  // counts of u1^3+u2^3+u3^3+u4^3+u5^4, independent of b
  const auto base = base_memo.get_or_make(p, [p] {
    const auto h3 = power_residue_histogram(3, p, true);
    auto f = detail::to_dense(*h3);
    const auto s3 = h3->support();
    for (int i = 0; i < 3; ++i) f = detail::cyclic_convolve(f, s3);
    return detail::cyclic_convolve(f, power_residue_histogram(4, p, true)->support());
  });
  auto hb = power_residue_histogram(b, p, true);
  auto h2u = power_residue_histogram(2, p, true);
  auto h2 = power_residue_histogram(2, p, false);
  auto K = detail::cyclic_convolve(*base, hb->support());
  auto Ls = detail::cyclic_convolve(K, h2u->support());
  auto L = detail::cyclic_convolve(K, h2->support());
  return LocalCountTable::dense(p, b, std::move(L), std::move(K), std::move(Ls));
}

inline LocalCountTable by_gauss_periods(u64 p, u64 b) {
  if (p < 3) throw domain_error("by_gauss_periods: p must be an odd prime");
  u64 D = 1;
  for (u64 k : {u64{2}, u64{3}, u64{4}, b}) D = std::lcm(D, std::gcd(k, p - 1));
  const auto basis = detail::period_basis(p);
  const u64 g = basis->g;
  const auto& moduli = basis->moduli;
  std::array<std::array<std::vector<u64>, 3>, 2> res;
  for (std::size_t i = 0; i < 2; ++i) {
    const detail::Montgomery mg(moduli[i]);
    const auto eta = basis->order % D == 0 ? detail::coarsen_periods(basis->eta[i], D, mg)
                                           : detail::gaussian_periods(
                                                 p, D, detail::coset_slots(p, g, D), mg);
    res[i] = detail::period_counts_mod(p, b, D, mg, eta);
  }
  const auto& r1 = res[0];
  const auto& r2 = res[1];
  std::array<std::vector<u128>, 3> exact;
  for (std::size_t v = 0; v < 3; ++v) {
    exact[v].resize(D + 1);
    for (u64 i = 0; i <= D; ++i) {
      exact[v][i] = detail::crt2(r1[v][i], moduli[0], r2[v][i], moduli[1]);
    }
  }
  return LocalCountTable::by_class(p, b, D, g, std::move(exact[2]), std::move(exact[0]),
                                   std::move(exact[1]));
}

}  // namespace route

/// Above this prime the Gauss-period route replaces direct convolution.
inline constexpr u64 kConvolutionRouteMaxPrime = 600;

/// Memoized per (p, b mod (p-1)); b enters the unit congruence only through that class.
inline std::shared_ptr<const LocalCountTable> local_count_table(u64 p, u64 b) {
  static detail::Memo<std::pair<u64, u64>, LocalCountTable> memo;
  const u64 be = detail::effective_unit_exponent(b, p);
  return memo.get_or_make({p, be}, [&] {
    return p <= kConvolutionRouteMaxPrime ? route::by_convolution(p, be)
                                          : route::by_gauss_periods(p, be);
  });
}

inline u128 count_K(u64 p, u64 n_res, unsigned b) {
  detail::check_local_args(p, n_res, b);
  return local_count_table(p, b)->K(n_res);
}

inline u128 count_Lstar(u64 p, u64 n_res, unsigned b) {
  detail::check_local_args(p, n_res, b);
  return local_count_table(p, b)->Lstar(n_res);
}

inline u128 count_L(u64 p, u64 n_res, unsigned b) {
  detail::check_local_args(p, n_res, b);
  return local_count_table(p, b)->L(n_res);
}

/// (p-1)^2 (sqrt p + 1)(2 sqrt p + 1)^4 (3 sqrt p + 1)
inline double error_term_bound(u64 p) {
  const double sp = std::sqrt(static_cast<double>(p));
  const double pm1 = static_cast<double>(p - 1);
  return pm1 * pm1 * (sp + 1) * std::pow(2 * sp + 1, 4) * (3 * sp + 1);
}

inline i128 pow_i128(i128 base, unsigned e) {
  i128 r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

struct ErrorTerm {
  i128 Ep = 0;
  double bound = 0.0;
};

/// E_p = p L*(p,N) - (p-1)^7, checked against its character-sum bound.
inline ErrorTerm error_term(u64 p, u64 n_res, unsigned b) {
  const u128 ls = count_Lstar(p, n_res, b);
  ErrorTerm e;
  e.Ep = static_cast<i128>(p) * static_cast<i128>(ls) - pow_i128(static_cast<i128>(p - 1), 7);
  e.bound = error_term_bound(p);
  const double mag = static_cast<double>(e.Ep < 0 ? -e.Ep : e.Ep);
  if (mag > e.bound) throw consistency_error("error_term: |E_p| exceeds its bound");
  return e;
}

struct LocalSolutionCounts {
  u64 p = 0;
  u64 n_res = 0;
  unsigned b = 0;
  u128 L = 0, K = 0, Lstar = 0;
  i128 Ep = 0;
  double Ep_bound = 0.0;
};

inline LocalSolutionCounts local_counts(u64 p, u64 n_res, unsigned b) {
  detail::check_local_args(p, n_res, b);
  const auto t = local_count_table(p, b);
  LocalSolutionCounts c;
  c.p = p;
  c.n_res = n_res;
  c.b = b;
  c.L = t->L(n_res);
  c.K = t->K(n_res);
  c.Lstar = t->Lstar(n_res);
  const auto e = error_term(p, n_res, b);
  c.Ep = e.Ep;
  c.Ep_bound = e.bound;
  if (c.L != c.Lstar + c.K) throw consistency_error("local_counts: L != L* + K");
  return c;
}

/// |p L* - sum_{a=1}^{p} S_2^* S_3^{*4} S_4^* S_b^* e(-a N/p)| in floating point.
inline double expsum_identity_residual(u64 p, u64 n_res, unsigned b) {
  detail::check_local_args(p, n_res, b);
  const auto s2 = histogram_sums_all(*power_residue_histogram(2, p, true));
  const auto s3 = histogram_sums_all(*power_residue_histogram(3, p, true));
  const auto s4 = histogram_sums_all(*power_residue_histogram(4, p, true));
  const auto sb = histogram_sums_all(*power_residue_histogram(b, p, true));
  const auto roots = detail::root_table(p);
  std::complex<double> acc(0.0, 0.0);
  for (u64 a = 0; a < p; ++a) {
    const auto c3 = s3[a] * s3[a];
    acc += s2[a] * c3 * c3 * s4[a] * sb[a] * (*roots)[(p - a * n_res % p) % p];
  }
  const double lhs = static_cast<double>(p) * static_cast<double>(count_Lstar(p, n_res, b));
  return std::abs(acc - lhs);
}

struct SmallPrimeCheck {
  u64 p = 0;
  u64 n_res = 0;
  u128 Lstar = 0;
  bool pass = false;
};

/// L*(p, N) > 0 for every residue modulo p in {3, 5, 7, 11}, and for the odd
/// residue at p = 2 (N is odd; the even class has L* = 0).
inline std::vector<SmallPrimeCheck> verify_small_primes(unsigned b) {
  std::vector<SmallPrimeCheck> out;
  for (u64 p : {2, 3, 5, 7, 11}) {
    for (u64 n = p == 2 ? 1 : 0; n < p; ++n) {
      const u128 ls = count_Lstar(p, n, b);
      out.push_back({p, n, ls, ls > 0});
    }
  }
  return out;
}

}  // namespace wg
