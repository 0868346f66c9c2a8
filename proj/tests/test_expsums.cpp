#include <gtest/gtest.h>

#include <numbers>
#include <numeric>
#include <random>

#include "wg/expsums.hpp"

using namespace wg;

namespace {

std::complex<double> naive_sum(u64 k, u64 q, i64 a, bool units) {
  std::complex<double> s = 0;
  for (u64 n = 1; n <= q; ++n) {
    if (units && std::gcd(n, q) != 1) continue;
    const u64 r = powmod(n % q, k, q);
    const u64 ar = mulmod(reduce_mod(a, q), r, q);
    s += std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(ar) / static_cast<double>(q));
  }
  return s;
}

}  // namespace

TEST(CompleteSum, Examples) {
  EXPECT_LT(complete_sum(2, 2, 1).abs(), 1e-12);
  for (u64 k : {1, 2, 7}) {
    const auto v = complete_sum(k, 1, 5);
    EXPECT_NEAR(v.real(), 1.0, 1e-15);
    EXPECT_NEAR(v.imag(), 0.0, 1e-15);
  }
  EXPECT_LT(std::abs(complete_sum(3, 7, 1).value - naive_sum(3, 7, 1, false)), 1e-12);
  EXPECT_THROW(complete_sum(2, 10'000'001, 1), bounds_error);
}

TEST(UnitSum, Examples) {
  EXPECT_NEAR(unit_sum(2, 2, 1).real(), -1.0, 1e-12);
  EXPECT_LT(unit_sum(3, 4, 1).abs(), 1e-12);
  EXPECT_LT(std::abs(unit_sum(3, 9, 1).value - naive_sum(3, 9, 1, true)), 1e-12);
}

TEST(ExpSums, AgreeWithNaiveSummation) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 400; ++i) {
    const u64 q = 1 + rng() % 600;
    const u64 k = 1 + rng() % 36;
    const i64 a = static_cast<i64>(rng() % 2000) - 1000;
    const auto c = complete_sum(k, q, a);
    const auto u = unit_sum(k, q, a);
    ASSERT_LT(std::abs(c.value - naive_sum(k, q, a, false)), 1e-9) << k << " " << q << " " << a;
    ASSERT_LT(std::abs(u.value - naive_sum(k, q, a, true)), 1e-9);
    ASSERT_LE(c.abs_error, 1e-8 * static_cast<double>(c.terms));
    ASSERT_LE(c.abs(), static_cast<double>(q) + c.abs_error);
  }
}

TEST(CharacterSum, PrincipalIsUnitSum) {
  for (u64 p : {5, 7, 13, 101}) {
    const auto t = character_table_mod_p(p);
    for (u64 k : {2, 3, 12}) {
      for (i64 a : {1, 2, 3}) {
        const auto g = character_sum(k, t.characters[0], a);
        EXPECT_LT(std::abs(g.value - unit_sum(k, p, a).value), 1e-10);
      }
    }
  }
}

TEST(CharacterSum, GaussSumModulus) {
  const auto t = character_table_mod_p(5);
  for (std::size_t j = 1; j < t.characters.size(); ++j) {
    const auto g = character_sum(1, t.characters[j], 1);
    EXPECT_NEAR(g.abs(), std::sqrt(5.0), 1e-9);
    std::complex<double> direct = 0;
    for (u64 n = 1; n < 5; ++n) {
      direct += t.characters[j](static_cast<i64>(n)) * std::polar(1.0, 2 * std::numbers::pi * n / 5.0);
    }
    EXPECT_LT(std::abs(direct - g.value), 1e-12);
  }
  for (u64 p : {7, 11, 101, 997}) {
    const auto tp = character_table_mod_p(p);
    for (std::size_t j = 1; j < tp.characters.size(); j += 1 + tp.characters.size() / 7) {
      EXPECT_NEAR(character_sum(1, tp.characters[j], 3).abs(), std::sqrt(static_cast<double>(p)), 1e-8);
    }
  }
}

TEST(CharacterSum, TriangleBoundAndModulusMismatch) {
  const auto t = character_table_mod_p(7);
  for (const auto& chi : t.characters) EXPECT_LE(character_sum(3, chi, 1).abs(), 7.0);
  EXPECT_THROW(character_sum(3, 11, t.characters[1], 1), domain_error);
}

TEST(GammaCutoff, Examples) {
  EXPECT_EQ(gamma_cutoff(3, 3), 3u);
  EXPECT_EQ(gamma_cutoff(4, 2), 5u);
  EXPECT_EQ(gamma_cutoff(3, 5), 2u);
  EXPECT_EQ(gamma_cutoff(3, 2), 2u);
  EXPECT_EQ(gamma_cutoff(12, 2), 5u);
  EXPECT_EQ(gamma_cutoff(12, 3), 3u);
}

TEST(ExpSums, WeilTypeBoundAtPrimes) {
  for (u64 p : primes_up_to(500)) {
    for (u64 j : {2, 3, 4, 12, 13, 17, 18, 24, 30, 35}) {
      const double bound = (static_cast<double>(std::gcd(j, p - 1)) - 1) * std::sqrt(static_cast<double>(p)) + 1e-6;
      for (u64 a = 1; a < p; ++a) {
        ASSERT_LE(complete_sum(j, p, static_cast<i64>(a)).abs(), bound) << "p=" << p << " j=" << j << " a=" << a;
      }
    }
  }
}

TEST(ExpSums, VanishingAbovePrimePowerCutoff) {
  for (u64 p : primes_up_to(50)) {
    for (u64 k : {2, 3, 4, 12, 24, 35}) {
      const unsigned g = gamma_cutoff(k, p);
      u64 q = 1;
      for (unsigned l = 1; l <= 40; ++l) {
        if (q > 1'000'000 / p) break;
        q *= p;
        if (l < g) continue;
        for (u64 a : {u64{1}, u64{2}, u64{5}, q - 1}) {
          if (std::gcd(a, p) != 1) continue;
          ASSERT_LE(unit_sum(k, q, static_cast<i64>(a)).abs(), 1e-6) << "k=" << k << " q=" << q << " a=" << a;
        }
      }
    }
  }
}

TEST(ExpSums, TwistedMultiplicativity) {
  std::mt19937_64 rng(23);
  int checked = 0;
  while (checked < 300) {
    const u64 q1 = 1 + rng() % 500, q2 = 1 + rng() % 500;
    if (std::gcd(q1, q2) != 1) continue;
    const u64 q = q1 * q2;
    const u64 k = 1 + rng() % 12;
    const u64 a = 1 + rng() % q;
    if (std::gcd(a, q) != 1) continue;
    const i64 a1 = static_cast<i64>(mulmod(a, powmod(q2 % q1, k - 1, q1), q1));
    const i64 a2 = static_cast<i64>(mulmod(a, powmod(q1 % q2, k - 1, q2), q2));
    for (bool units : {false, true}) {
      const auto lhs = units ? unit_sum(k, q, static_cast<i64>(a)) : complete_sum(k, q, static_cast<i64>(a));
      const auto r1 = units ? unit_sum(k, q1, a1) : complete_sum(k, q1, a1);
      const auto r2 = units ? unit_sum(k, q2, a2) : complete_sum(k, q2, a2);
      const auto rhs = r1.value * r2.value;
      ASSERT_LE(std::abs(lhs.value - rhs), 1e-8 * std::max(1.0, std::abs(rhs)) + 1e-9 * static_cast<double>(q))
          << q1 << " " << q2 << " k=" << k << " a=" << a;
    }
    ++checked;
  }
}

TEST(ExpSums, GrowthDiagnosticIsFinite) {
  double worst = 0;
  for (u64 q = 2; q <= 2000; q += 37) {
    for (u64 j : {2, 3, 4}) {
      for (u64 a = 1; a < q; a += 1 + q / 50) {
        if (std::gcd(a, q) != 1) continue;
        worst = std::max(worst, complete_sum(j, q, static_cast<i64>(a)).abs() /
                                    std::pow(static_cast<double>(q), 1.0 - 1.0 / static_cast<double>(j)));
      }
    }
  }
  RecordProperty("max_ratio", std::to_string(worst));
  EXPECT_TRUE(std::isfinite(worst));
}
