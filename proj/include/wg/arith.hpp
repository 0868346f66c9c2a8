#pragma once

// Exact integer primitives: primes, factorization, multiplicative functions,
// power-residue histograms and Dirichlet characters to a prime modulus.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "wg/detail/memo.hpp"
#include "wg/errors.hpp"

namespace wg {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

inline std::string to_string(i128 v) {
  if (v < 0) return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
  return to_string(static_cast<u128>(v));
}

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod(u64 base, u64 e, u64 m) {
  if (m == 1) return 0;
  u64 r = 1;
  base %= m;
  while (e != 0) {
    if (e & 1U) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1U;
  }
  return r;
}

/// Reduce a signed integer into [0, q).
inline u64 reduce_mod(i64 a, u64 q) {
  const i64 qq = static_cast<i64>(q);
  i64 r = a % qq;
  if (r < 0) r += qq;
  return static_cast<u64>(r);
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact below 3.3e24.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kBases) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : kBases) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// All primes <= limit, ascending (odd-only sieve of Eratosthenes).
inline std::vector<u64> primes_up_to(u64 limit) {
  if (limit < 2 || limit > 1'000'000'000ULL) {
    throw bounds_error("primes_up_to: limit must lie in [2, 1e9]");
  }
  std::vector<u64> primes{2};
  const u64 half = (limit - 1) / 2;  // index i <-> 2i+1, i >= 1
  std::vector<bool> composite(half + 1, false);
  for (u64 i = 1; i <= half; ++i) {
    if (composite[i]) continue;
    const u64 p = 2 * i + 1;
    primes.push_back(p);
    for (u64 j = (p * p - 1) / 2; j <= half; j += p) composite[j] = true;
  }
  return primes;
}

struct PrimePower {
  u64 prime = 0;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// n = prod prime^exponent with primes strictly increasing.
struct Factorization {
  u64 n = 1;
  std::vector<PrimePower> factors;

  bool squarefree() const {
    return std::all_of(factors.begin(), factors.end(),
                       [](const PrimePower& f) { return f.exponent == 1; });
  }
  std::vector<u64> primes() const {
    std::vector<u64> out;
    for (const auto& f : factors) out.push_back(f.prime);
    return out;
  }
};

namespace detail {

inline u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 x) { return (mulmod(x, x, n) + c) % n; };
    u64 y = 2, g = 1, q = 1, x = 0, ys = 0;
    u64 r = 1;
    constexpr u64 m = 128;
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void split_cofactor(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_brent(n);
  split_cofactor(d, out);
  split_cofactor(n / d, out);
}

}  // namespace detail

/// Trial division to 1e5, then Miller-Rabin / Pollard-Brent on the cofactor.
inline Factorization factorize(u64 n) {
  if (n == 0) throw domain_error("factorize: n must be positive");
  if (n > 1'000'000'000'000'000ULL) throw bounds_error("factorize: n must be <= 1e15");
  Factorization out;
  out.n = n;
  u64 m = n;
  auto take = [&](u64 p) {
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e != 0) out.factors.push_back({p, e});
  };
  take(2);
  for (u64 p = 3; p <= 100'000 && p * p <= m; p += 2) take(p);
  if (m > 1) {
    std::vector<u64> rest;
    detail::split_cofactor(m, rest);
    std::sort(rest.begin(), rest.end());
    for (u64 p : rest) {
      if (!out.factors.empty() && out.factors.back().prime == p) {
        ++out.factors.back().exponent;
      } else {
        out.factors.push_back({p, 1});
      }
    }
  }
  return out;
}

inline u64 euler_phi(u64 n) {
  u64 r = n;
  for (const auto& f : factorize(n).factors) r = r / f.prime * (f.prime - 1);
  return r;
}

inline int moebius(u64 n) {
  const auto fac = factorize(n);
  if (!fac.squarefree()) return 0;
  return fac.factors.size() % 2 == 0 ? 1 : -1;
}

/// k-dimensional divisor function: prod over p^e || n of C(e+k-1, k-1).
inline u64 divisor_tau(u64 n, unsigned k) {
  if (k < 2) throw domain_error("divisor_tau: k must be >= 2");
  u64 r = 1;
  for (const auto& f : factorize(n).factors) {
    u64 c = 1;  // C(e+k-1, e) computed incrementally
    for (unsigned i = 1; i <= f.exponent; ++i) c = c * (k - 1 + i) / i;
    r *= c;
  }
  return r;
}

/// Carmichael function lambda(n): exponent of (Z/nZ)^*.
inline u64 carmichael_lambda(u64 n) {
  u64 r = 1;
  for (const auto& f : factorize(n).factors) {
    u64 pe = 1;
    for (unsigned i = 1; i < f.exponent; ++i) pe *= f.prime;
    u64 l = pe * (f.prime - 1);
    if (f.prime == 2 && f.exponent >= 3) l /= 2;
    r = std::lcm(r, l);
  }
  return r;
}

/// Least primitive root of an odd prime p.
inline u64 primitive_root(u64 p) {
  if (p == 2) return 1;
  const auto fac = factorize(p - 1);
  for (u64 g = 2; g < p; ++g) {
    bool ok = true;
    for (const auto& f : fac.factors) {
      if (powmod(g, (p - 1) / f.prime, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw consistency_error("primitive_root: none found");
}

// ---------------------------------------------------------------------------
// Residue histograms

/// counts[r] = #{u in [1, q] : u^k == r (mod q)}, optionally restricted to units.
struct ResidueHistogram {
  u64 modulus = 1;
  u64 exponent = 1;  // canonical representative of k (see canonical_exponent)
  bool units_only = false;
  std::vector<u64> counts;

  u64 mass() const { return std::accumulate(counts.begin(), counts.end(), u64{0}); }

  /// Nonzero (residue, count) pairs, ascending residue.
  std::vector<std::pair<u64, u64>> support() const {
    std::vector<std::pair<u64, u64>> out;
    for (u64 r = 0; r < counts.size(); ++r) {
      if (counts[r] != 0) out.emplace_back(r, counts[r]);
    }
    return out;
  }
};

namespace detail {

inline constexpr u64 kHistogramMaxModulus = 10'000'000;
inline constexpr u64 kHistogramCacheMaxModulus = 1U << 17;

// u^k mod q depends on k only through k mod lambda(q) once k reaches the
// largest exponent in q (units: from k >= 1 on).
inline u64 canonical_exponent(u64 k, u64 q, bool units_only) {
  if (q == 1) return 1;
  const auto fac = factorize(q);
  const u64 lam = carmichael_lambda(q);
  u64 floor_k = 1;
  if (!units_only) {
    for (const auto& f : fac.factors) floor_k = std::max<u64>(floor_k, f.exponent);
  }
  if (k < floor_k + lam) return k;
  return floor_k + (k - floor_k) % lam;
}

inline ResidueHistogram build_histogram(u64 k, u64 q, bool units_only) {
  ResidueHistogram h;
  h.modulus = q;
  h.exponent = k;
  h.units_only = units_only;
  h.counts.assign(q, 0);
  for (u64 u = 1; u <= q; ++u) {
    if (units_only && std::gcd(u, q) != 1) continue;
    ++h.counts[powmod(u % q, k, q)];
  }
  return h;
}

inline Memo<std::tuple<u64, u64, bool>, ResidueHistogram>& histogram_memo() {
  static Memo<std::tuple<u64, u64, bool>, ResidueHistogram> memo;
  return memo;
}

}  // namespace detail

inline std::shared_ptr<const ResidueHistogram> power_residue_histogram(u64 k, u64 q,
                                                                       bool units_only) {
  if (k == 0) throw domain_error("power_residue_histogram: exponent must be >= 1");
  if (q == 0) throw domain_error("power_residue_histogram: modulus must be >= 1");
  if (q > detail::kHistogramMaxModulus) {
    throw bounds_error("power_residue_histogram: modulus must be <= 1e7");
  }
  const u64 kc = detail::canonical_exponent(k, q, units_only);
  if (q > detail::kHistogramCacheMaxModulus) {
    return std::make_shared<const ResidueHistogram>(detail::build_histogram(kc, q, units_only));
  }
  return detail::histogram_memo().get_or_make(
      {kc, q, units_only}, [&] { return detail::build_histogram(kc, q, units_only); });
}

// ---------------------------------------------------------------------------
// Dirichlet characters modulo an odd prime

/// chi_j(g^m) = e(j m / (p-1)) for the least primitive root g. Values are exact
/// roots of unity, kept as exponents over p-1.
class DirichletCharacter {
 public:
  DirichletCharacter(u64 p, u64 index, std::shared_ptr<const std::vector<u64>> dlog)
      : p_(p), index_(index), dlog_(std::move(dlog)) {}

  u64 modulus() const { return p_; }
  u64 index() const { return index_; }
  bool is_principal() const { return index_ == 0; }

  /// chi(u) = e(exponent(u) / (p-1)) for units u.
  u64 exponent(u64 u) const { return mulmod(index_, (*dlog_)[u % p_], p_ - 1); }

  std::complex<double> operator()(i64 n) const {
    const u64 u = reduce_mod(n, p_);
    if (u == 0) return {0.0, 0.0};
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(exponent(u)) /
                         static_cast<double>(p_ - 1);
    return std::polar(1.0, angle);
  }

 private:
  u64 p_;
  u64 index_;
  std::shared_ptr<const std::vector<u64>> dlog_;
};

struct CharacterTable {
  u64 modulus = 0;
  u64 generator = 0;
  std::vector<DirichletCharacter> characters;  // characters[0] is principal
};

inline CharacterTable character_table_mod_p(u64 p) {
  if (p < 3 || p % 2 == 0 || !is_prime(p)) {
    throw domain_error("character_table_mod_p: modulus must be an odd prime");
  }
  if (p > 100'000) throw bounds_error("character_table_mod_p: modulus must be <= 1e5");
  CharacterTable t;
  t.modulus = p;
  t.generator = primitive_root(p);
  auto dlog = std::make_shared<std::vector<u64>>(p, 0);
  u64 x = 1;
  for (u64 m = 0; m + 1 < p; ++m) {
    (*dlog)[x] = m;
    x = x * t.generator % p;
  }
  std::shared_ptr<const std::vector<u64>> shared = dlog;
  for (u64 j = 0; j + 1 < p; ++j) t.characters.emplace_back(p, j, shared);
  return t;
}

}  // namespace wg
