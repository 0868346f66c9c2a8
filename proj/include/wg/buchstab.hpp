#pragma once

// Iterated Buchstab integrals
//
//   I_1(T) = int_2^T log(u-1)/u du,   I_j(T) = int_{j+1}^T I_{j-1}(u-1)/u du,
//
// the weights c_r(b) = I_{r-2}(s_b), their tail sums C(b), the linear-sieve
// functions f and F on their closed-form windows, and the order formulas.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <tuple>
#include <vector>

#include "wg/buchstab_cache.hpp"
#include "wg/buchstab_level.hpp"
#include "wg/chebyshev.hpp"
#include "wg/detail/memo.hpp"
#include "wg/interval.hpp"

namespace wg {

using BudgetRational = boost::multiprecision::cpp_rational;

inline constexpr double kEulerGamma = 0.57721566490153286060651209;

/// Exponents of the sieve set-up for one b, with epsilon = 0.
struct SieveBudget {
  unsigned b = 0;
  BudgetRational s_b;        // (73b - 36)/(36 - b)
  long long M_b = 0;         // floor(72b/(36 - b))
  BudgetRational D_exponent; // 3/(4b) - 1/48
  BudgetRational z_exponent; // D_exponent / 3
  BudgetRational U2_exponent{1, 2};

  double s() const { return s_b.convert_to<double>(); }
};

inline SieveBudget budget(unsigned b) {
  if (b < 12 || b > 35) throw domain_error("budget: b must lie in 12..35");
  SieveBudget sb;
  sb.b = b;
  const long long bb = b;
  sb.s_b = BudgetRational(73 * bb - 36, 36 - bb);
  sb.M_b = (72 * bb) / (36 - bb);
  sb.D_exponent = BudgetRational(3, 4 * bb) - BudgetRational(1, 48);
  sb.z_exponent = sb.D_exponent / 3;
  if (sb.s_b != BudgetRational(72 * bb, 36 - bb) - 1) {
    throw consistency_error("budget: s_b != 72b/(36-b) - 1");
  }
  if (sb.s_b + 1 != sb.U2_exponent / sb.z_exponent) {
    throw consistency_error("budget: s_b + 1 != U2 exponent / z exponent");
  }
  if (sb.D_exponent <= 0) throw consistency_error("budget: D exponent not positive");
  if (BudgetRational(sb.M_b) > sb.s_b + 1 || BudgetRational(sb.M_b + 1) <= sb.s_b + 1) {
    throw consistency_error("budget: M_b != floor(s_b + 1)");
  }
  return sb;
}

/// All levels I_1..I_J on [j+1, s], built until I_J(s) drops below the cut.
struct BuchstabTower {
  double s = 0.0;
  double tol = 0.0;
  double cut = 0.0;
  bool truncated = false;   // true when later levels are bounded, not computed
  std::vector<BuchstabLevel> levels;

  unsigned depth() const { return static_cast<unsigned>(levels.size()); }

  /// Enclosure of I_j(s). Levels past the cut use
  /// I_{J+k}(s) <= I_J(s) log(s/(J+2))^k / k!.
  IntervalValue value(unsigned j) const {
    if (j == 0) throw domain_error("BuchstabTower: level must be >= 1");
    if (s <= j + 1.0) return IntervalValue::exact(0.0);
    if (j <= depth()) {
      const auto& lv = levels[j - 1];
      const double v = lv(s);
      const double e = lv.error_bound(std::max(v, 0.0));
      return {v, std::max(0.0, v - e), v + e};
    }
    if (!truncated) return IntervalValue::exact(0.0);
    return {0.0, 0.0, past_cut_bound(j)};
  }

  /// Bound on sum_{j > J} I_j(s), i.e. I_J(s) (exp(L) - 1).
  double past_cut_sum_bound() const {
    if (!truncated || levels.empty()) return 0.0;
    const double base = value(depth()).hi;
    const double L = std::log(s / (depth() + 2.0));
    return base * std::expm1(std::max(L, 0.0));
  }

 private:
  double past_cut_bound(unsigned j) const {
    const double base = value(depth()).hi;
    const double L = std::max(0.0, std::log(s / (depth() + 2.0)));
    const unsigned k = j - depth();
    return base * std::exp(k * std::log(std::max(L, 1e-300)) - std::lgamma(k + 1.0));
  }
};

namespace detail {

inline constexpr unsigned kChebDegree = 24;
inline constexpr double kAbsFloor = 1e-40;
inline constexpr double kLevelRounding = 2e-15;
inline constexpr unsigned kMaxLevels = 4000;

inline std::vector<double> initial_breaks(unsigned j, double s, const BuchstabLevel* prev) {
  std::vector<double> br;
  const double lo = j + 1.0;
  br.push_back(lo);
  if (prev == nullptr) {
    double x = lo;
    while (true) {
      const double w = x < 10.0 ? 1.0 : std::max(1.0, 0.5 * (x - j));
      x += w;
      if (x >= s * (1 - 1e-12)) break;
      br.push_back(x);
    }
  } else {
    for (double x : prev->breaks) {
      const double y = x + 1.0;
      if (y > lo * (1 + 1e-14) && y < s * (1 - 1e-12)) br.push_back(y);
    }
  }
  br.push_back(s);
  return br;
}

template <class F>
BuchstabLevel build_level(unsigned j, double s, double tol_rel, const BuchstabLevel* prev,
                          F&& integrand) {
  BuchstabLevel lv;
  lv.level = j;
  lv.upper = s;
  const auto init = initial_breaks(j, s, prev);
  double max_rel = 0.0;
  double floor_abs = 0.0;
  double offset = 0.0;
  lv.breaks.push_back(init.front());

  struct Job {
    double a, b;
  };
  for (std::size_t i = 0; i + 1 < init.size(); ++i) {
    std::vector<Job> stack{{init[i], init[i + 1]}};
    while (!stack.empty()) {
      const Job job = stack.back();
      stack.pop_back();
      const double w = job.b - job.a;
      auto c = cheb::fit(integrand, job.a, job.b, kChebDegree);
      const double err = 2.0 * cheb::tail(c) * w;
      const double mass = cheb::definite(c, 0.5 * w);
      bool accept = false;
      if (mass > 0 && err <= tol_rel * mass) {
        max_rel = std::max(max_rel, err / mass);
        accept = true;
      } else if (err <= kAbsFloor) {
        floor_abs += err;
        accept = true;
      } else if (w < 1e-9 * std::max(1.0, job.a)) {
        throw quadrature_error("iterated integral: panel refinement limit reached");
      }
      if (!accept) {
        const double mid = 0.5 * (job.a + job.b);
        stack.push_back({mid, job.b});
        stack.push_back({job.a, mid});
        continue;
      }
      auto g = cheb::antiderivative(c, 0.5 * w);
      g[0] += offset;
      offset += mass;
      lv.coeffs.push_back(std::move(g));
      lv.breaks.push_back(job.b);
    }
  }
  const double prev_rel = prev ? prev->rel_error : 0.0;
  const double prev_abs = prev ? prev->abs_error * std::max(1.0, std::log(s / (j + 1.0))) : 0.0;
  lv.rel_error = prev_rel + max_rel + kLevelRounding;
  lv.abs_error = prev_abs + floor_abs;
  return lv;
}

inline BuchstabTower build_tower(double s, double tol_rel, double cut, unsigned cache_b) {
  BuchstabTower tw;
  tw.s = s;
  tw.tol = tol_rel;
  tw.cut = cut;
  for (unsigned j = 1; j + 1.0 < s; ++j) {
    if (j > kMaxLevels) throw quadrature_error("iterated integral: level limit reached");
    const BuchstabLevel* prev = tw.levels.empty() ? nullptr : &tw.levels.back();
    std::optional<BuchstabLevel> lv;
    if (cache_b != 0) lv = buchstab_cache::load(cache_b, j, tol_rel, s);
    if (!lv) {
      if (j == 1) {
        lv = build_level(j, s, tol_rel, nullptr, [](double u) { return std::log(u - 1.0) / u; });
      } else {
        lv = build_level(j, s, tol_rel, prev, [prev](double u) { return (*prev)(u - 1.0) / u; });
      }
      if (cache_b != 0) buchstab_cache::store(*lv, cache_b, tol_rel);
    }
    tw.levels.push_back(std::move(*lv));
    if (tw.levels.back()(s) < cut) {
      tw.truncated = j + 2.0 < s;
      break;
    }
  }
  return tw;
}

inline Memo<std::tuple<double, double, double, unsigned>, BuchstabTower>& tower_memo() {
  static Memo<std::tuple<double, double, double, unsigned>, BuchstabTower> memo;
  return memo;
}

/// Build tolerance and cut derived from the requested absolute tolerance.
inline std::pair<double, double> tower_parameters(double tol, double s) {
  if (!(tol > 0)) throw domain_error("iterated integral: tol must be > 0");
  const double rel = std::clamp(tol * 1e-3, 1e-14, 1e-9);
  const double cut = std::min(1e-12, 1e-2 * tol / std::max(1.0, s));
  return {rel, cut};
}

inline std::shared_ptr<const BuchstabTower> tower(double s, double tol, unsigned cache_b) {
  const auto [rel, cut] = tower_parameters(tol, s);
  return tower_memo().get_or_make({s, rel, cut, cache_b},
                                  [&] { return build_tower(s, rel, cut, cache_b); });
}

inline IntervalValue checked(const IntervalValue& v, double tol) {
  if (v.width() > tol) throw quadrature_error("iterated integral: tolerance not reached");
  return v;
}

}  // namespace detail

/// Drops the in-memory towers (the disk cache is untouched).
inline void clear_memory_cache() { detail::tower_memo().clear(); }

/// The tower for the budget of b, shared through the memory and disk caches.
inline std::shared_ptr<const BuchstabTower> buchstab_tower(unsigned b, double tol) {
  return detail::tower(budget(b).s(), tol, b);
}

/// I_{r-2}(s); zero when s <= r - 1.
inline IntervalValue iterated_integral(unsigned r, double s, double tol) {
  if (r < 3) throw domain_error("iterated_integral: r must be >= 3");
  if (!(tol > 0)) throw domain_error("iterated_integral: tol must be > 0");
  if (!std::isfinite(s)) throw domain_error("iterated_integral: s must be finite");
  if (s <= r - 1.0) return IntervalValue::exact(0.0);
  return detail::checked(detail::tower(s, tol, 0)->value(r - 2), tol);
}

inline IntervalValue c_r(unsigned r, unsigned b, double tol) {
  if (r < 3) throw domain_error("c_r: r must be >= 3");
  const auto sb = budget(b);
  if (sb.s() <= r - 1.0) return IntervalValue::exact(0.0);
  return detail::checked(buchstab_tower(b, tol)->value(r - 2), tol);
}

/// sum_{r=r0+1}^{M(b)} c_r(b). Levels past the cut contribute only to hi.
inline IntervalValue C_total(unsigned b, unsigned r0, double tol) {
  if (r0 < 2) throw domain_error("C_total: r0 must be >= 2");
  const auto sb = budget(b);
  const auto tw = buchstab_tower(b, tol);
  double point = 0, lo = 0, hi = 0;
  for (long long r = r0 + 1; r <= sb.M_b; ++r) {
    const unsigned j = static_cast<unsigned>(r - 2);
    if (j > tw->depth()) break;
    const auto v = tw->value(j);
    point += v.point;
    lo += v.lo;
    hi += v.hi;
  }
  if (tw->truncated && r0 + 1 <= sb.M_b) {
    const unsigned first = std::max<unsigned>(r0 - 1, tw->depth() + 1);
    if (first == tw->depth() + 1) {
      hi += tw->past_cut_sum_bound();
    } else {
      for (unsigned j = first; j + 2 <= sb.M_b; ++j) {
        const double bnd = tw->value(j).hi;
        hi += bnd;
        if (bnd < 1e-300) break;
      }
    }
  }
  const double slack = 4 * std::numeric_limits<double>::epsilon() * (sb.M_b + 1.0) * std::abs(hi);
  return {point, std::min(lo, point), hi + slack};
}

/// F(s) = 2 e^gamma / s on [1, 3].
inline double sieve_F(double s) {
  if (!(s >= 1 && s <= 3)) throw domain_error("sieve_F: s must lie in [1, 3]");
  return 2 * std::exp(kEulerGamma) / s;
}

/// f(s) = 2 e^gamma log(s - 1) / s on [2, 4].
inline double sieve_f(double s) {
  if (!(s >= 2 && s <= 4)) throw domain_error("sieve_f: s must lie in [2, 4]");
  return 2 * std::exp(kEulerGamma) * std::log(s - 1) / s;
}

/// Smallest r >= 3 with C_total(b, r).hi < log 2.
inline unsigned min_r(unsigned b, double tol) {
  const auto sb = budget(b);
  for (long long r = 3; r <= sb.M_b; ++r) {
    if (C_total(b, static_cast<unsigned>(r), tol).hi < std::numbers::ln2) {
      return static_cast<unsigned>(r);
    }
  }
  return static_cast<unsigned>(sb.M_b);
}

/// floor((4/3) (1/a + 1/b - 5/18)^{-1}) under 5/18 < 1/a + 1/b <= 1/3.
inline unsigned long long lumu_r(unsigned long long a, unsigned long long b) {
  if (a == 0 || b == 0) throw domain_error("lumu_r: a and b must be >= 1");
  const long long A = static_cast<long long>(a), B = static_cast<long long>(b);
  const long long den = 18 * (A + B) - 5 * A * B;
  if (den <= 0 || 3 * (A + B) > A * B) {
    throw domain_error("lumu_r: requires 5/18 < 1/a + 1/b <= 1/3");
  }
  return static_cast<unsigned long long>((24 * A * B) / den);
}

}  // namespace wg
