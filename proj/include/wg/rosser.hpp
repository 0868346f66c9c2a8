#pragma once

// Rosser's linear-sieve weights of level D over the odd primes below z.
// Writing d = p_1 p_2 ... p_l with p_1 > p_2 > ... > p_l, the upper weight
// equals mu(d) when p_1...p_{m-1} p_m^3 <= D for every odd m <= l, the lower
// weight when the same holds for every even m <= l, and both vanish otherwise.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "wg/arith.hpp"

namespace wg {

enum class Sign { Lower, Upper };

inline const char* to_string(Sign s) { return s == Sign::Lower ? "lower" : "upper"; }

namespace detail {

inline void check_level(double D, double z) {
  if (!(D >= 2)) throw domain_error("Rosser weights: D must be >= 2");
  if (!(z >= 3)) throw domain_error("Rosser weights: z must be >= 3");
  if (z > D) throw domain_error("Rosser weights: z must not exceed D");
}

inline bool constrained(Sign s, std::size_t m) {
  return s == Sign::Upper ? (m % 2 == 1) : (m % 2 == 0);
}

/// Odd prime factors of d in decreasing order; rejects non-squarefree or even d
/// and primes >= z.
inline std::vector<u64> sieve_support_primes(u64 d, double z) {
  if (d == 0) throw domain_error("Rosser weights: d must be >= 1");
  const auto f = factorize(d);
  if (!f.squarefree()) throw domain_error("Rosser weights: d must be squarefree");
  auto ps = f.primes();
  for (u64 p : ps) {
    if (p == 2) throw domain_error("Rosser weights: d must be odd");
    if (static_cast<double>(p) >= z) throw domain_error("Rosser weights: prime factor >= z");
  }
  std::reverse(ps.begin(), ps.end());
  return ps;
}

}  // namespace detail

/// lambda^{+-}(d) in {-1, 0, 1}.
inline int lambda(Sign sign, u64 d, double D, double z) {
  detail::check_level(D, z);
  const auto ps = detail::sieve_support_primes(d, z);
  long double prefix = 1;
  for (std::size_t m = 1; m <= ps.size(); ++m) {
    const long double p = static_cast<long double>(ps[m - 1]);
    if (detail::constrained(sign, m) && prefix * p * p * p > D) return 0;
    prefix *= p;
  }
  return ps.size() % 2 == 0 ? 1 : -1;
}

struct FundamentalCheck {
  long long lower_sum = 0;
  long long upper_sum = 0;
  int e_n = 0;
};

/// Divisor sums of both weights against [n = 1]; throws if the sandwich fails.
inline FundamentalCheck fundamental_check(u64 n, double D, double z) {
  detail::check_level(D, z);
  const auto ps = detail::sieve_support_primes(n, z);
  if (ps.size() > 24) throw resource_error("fundamental_check: too many prime factors");
  FundamentalCheck out;
  out.e_n = n == 1 ? 1 : 0;
  const std::size_t subsets = std::size_t{1} << ps.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    u64 d = 1;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (mask >> i & 1U) d *= ps[i];
    }
    out.lower_sum += lambda(Sign::Lower, d, D, z);
    out.upper_sum += lambda(Sign::Upper, d, D, z);
  }
  if (!(out.lower_sum <= out.e_n && out.e_n <= out.upper_sum)) {
    throw consistency_error("fundamental_check: sandwich violated");
  }
  return out;
}

/// g(p) = omega(p)/p on the odd primes below z, ascending.
struct SieveDensity {
  std::vector<u64> primes;
  std::vector<double> g;

  static std::vector<u64> odd_primes_below(double z) {
    if (!(z >= 3)) throw domain_error("SieveDensity: z must be >= 3");
    if (z > 1e9) throw bounds_error("SieveDensity: z must be <= 1e9");
    std::vector<u64> out;
    for (u64 p : primes_up_to(static_cast<u64>(std::max(2.0, std::ceil(z) - 1)))) {
      if (p != 2 && static_cast<double>(p) < z) out.push_back(p);
    }
    return out;
  }

  static SieveDensity zero(double z) {
    SieveDensity s;
    s.primes = odd_primes_below(z);
    s.g.assign(s.primes.size(), 0.0);
    return s;
  }

  /// g(p) = 1/p.
  static SieveDensity uniform(double z) {
    SieveDensity s;
    s.primes = odd_primes_below(z);
    for (u64 p : s.primes) s.g.push_back(1.0 / static_cast<double>(p));
    return s;
  }

  /// g(p) = u_p min(1, kappa/p) with u_p uniform in [0, 1) and kappa in [0.5, 3).
  static SieveDensity random(double z, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SieveDensity s;
    s.primes = odd_primes_below(z);
    const double kappa = 0.5 + 2.5 * unit(rng);
    for (u64 p : s.primes) s.g.push_back(unit(rng) * std::min(1.0, kappa / static_cast<double>(p)));
    for (double& v : s.g) v = std::min(v, 0.999999);
    return s;
  }

  void validate() const {
    if (g.size() != primes.size()) throw domain_error("SieveDensity: size mismatch");
    for (double v : g) {
      if (!(v >= 0 && v < 1)) throw domain_error("SieveDensity: g(p) must lie in [0, 1)");
    }
  }

  /// prod (1 - g(p)) in long double.
  long double product() const {
    long double v = 1;
    for (double x : g) v *= 1 - static_cast<long double>(x);
    return v;
  }
};

/// Nonzero weights of one sign, keyed by d.
struct RosserWeightTable {
  double D = 0;
  double z = 0;
  Sign sign = Sign::Upper;
  std::map<u64, int> weights;

  int operator()(u64 d) const {
    auto it = weights.find(d);
    return it == weights.end() ? 0 : it->second;
  }
};

namespace detail {

inline constexpr std::uint64_t kRosserNodeLimit = 100'000'000;

// Depth-first walk over the support: primes are taken in decreasing order, and
// at a constrained step only primes with prefix * p^3 <= D are admissible,
// which (p decreasing) is a suffix of the candidate range.
template <class Visit>
class SupportWalker {
 public:
  SupportWalker(Sign sign, double D, const std::vector<u64>& desc, Visit& visit)
      : sign_(sign), D_(D), desc_(desc), visit_(visit) {}

  void run() {
    ++nodes_;
    visit_(std::size_t{0}, 1.0L, -1, 1);
    descend(0, 1.0L, 1);
  }

 private:
  // next prime chosen from desc_[from..]; prefix = product so far; m = index of that prime
  void descend(std::size_t from, long double prefix, std::size_t m) {
    std::size_t i = from;
    if (constrained(sign_, m)) {
      // first index with prefix * p^3 <= D
      std::size_t lo = from, hi = desc_.size();
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        const long double p = static_cast<long double>(desc_[mid]);
        if (prefix * p * p * p <= D_) {
          hi = mid;
        } else {
          lo = mid + 1;
        }
      }
      i = lo;
    }
    const int sgn = m % 2 == 0 ? 1 : -1;
    for (; i < desc_.size(); ++i) {
      if (++nodes_ > kRosserNodeLimit) throw resource_error("Rosser weights: support exceeds 1e8 nodes");
      const long double next = prefix * static_cast<long double>(desc_[i]);
      visit_(m, next, static_cast<long long>(i), sgn);
      if (i + 1 < desc_.size()) descend(i + 1, next, m + 1);
    }
  }

  Sign sign_;
  double D_;
  const std::vector<u64>& desc_;
  Visit& visit_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// All d with lambda(d) != 0; intended for small D.
inline RosserWeightTable weight_table(Sign sign, double D, double z) {
  detail::check_level(D, z);
  auto asc = SieveDensity::odd_primes_below(z);
  std::vector<u64> desc(asc.rbegin(), asc.rend());
  RosserWeightTable t;
  t.D = D;
  t.z = z;
  t.sign = sign;
  // path[m] = index of the m-th chosen prime
  std::vector<std::size_t> path;
  auto visit = [&](std::size_t m, long double d, long long idx, int sgn) {
    if (idx < 0) {
      t.weights[1] = 1;
      return;
    }
    if (t.weights.size() >= 10'000'000) throw resource_error("weight_table: more than 1e7 weights");
    t.weights[static_cast<u64>(d + 0.5L)] = sgn;
    (void)m;
  };
  detail::SupportWalker<decltype(visit)> walker(sign, D, desc, visit);
  walker.run();
  return t;
}

/// sum_{d | P(z)} lambda(d) prod_{p | d} g(p), walking only the support.
inline long double sifted_sum(Sign sign, const SieveDensity& density, double z, double D) {
  detail::check_level(D, z);
  density.validate();
  std::vector<u64> desc;
  std::vector<double> gdesc;
  for (std::size_t k = density.primes.size(); k-- > 0;) {
    if (static_cast<double>(density.primes[k]) >= z) continue;
    if (density.primes[k] == 2) continue;
    desc.push_back(density.primes[k]);
    gdesc.push_back(density.g[k]);
  }
  // weight product along the current path, indexed by depth
  std::vector<long double> gprod(desc.size() + 2, 1.0L);
  long double total = 0;
  auto visit = [&](std::size_t m, long double, long long idx, int sgn) {
    if (idx < 0) {
      total += 1;
      return;
    }
    gprod[m] = gprod[m - 1] * static_cast<long double>(gdesc[static_cast<std::size_t>(idx)]);
    total += sgn * gprod[m];
  };
  detail::SupportWalker<decltype(visit)> walker(sign, D, desc, visit);
  walker.run();
  return total;
}

}  // namespace wg
