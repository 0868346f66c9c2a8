#include <gtest/gtest.h>

#include <random>

#include "wg/rosser.hpp"
#include "wg/singular_series.hpp"

using namespace wg;

namespace {

// weight straight from the definition, over ascending-sorted primes of d
int lambda_oracle(Sign sign, const std::vector<u64>& primes_desc, double D) {
  for (std::size_t m = 1; m <= primes_desc.size(); ++m) {
    const bool check = sign == Sign::Upper ? (m % 2 == 1) : (m % 2 == 0);
    if (!check) continue;
    long double prod = 1;
    for (std::size_t i = 0; i + 1 < m; ++i) prod *= static_cast<long double>(primes_desc[i]);
    const long double p = static_cast<long double>(primes_desc[m - 1]);
    if (prod * p * p * p > D) return 0;
  }
  return primes_desc.size() % 2 == 0 ? 1 : -1;
}

// sum over all subsets of the primes below z; only for tiny z
long double brute_sifted(Sign sign, const SieveDensity& dens, double D) {
  const std::size_t n = dens.primes.size();
  long double total = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<u64> ps;
    long double g = 1;
    for (std::size_t i = n; i-- > 0;) {
      if (mask >> i & 1U) {
        ps.push_back(dens.primes[i]);
        g *= dens.g[i];
      }
    }
    total += lambda_oracle(sign, ps, D) * g;
  }
  return total;
}

}  // namespace

TEST(Lambda, Examples) {
  EXPECT_EQ(lambda(Sign::Upper, 1, 100, 50), 1);
  EXPECT_EQ(lambda(Sign::Lower, 1, 100, 50), 1);
  for (u64 p : {3, 5, 7, 11, 13, 47}) EXPECT_EQ(lambda(Sign::Lower, p, 100, 50), -1);
  EXPECT_EQ(lambda(Sign::Upper, 5, 10, 7), 0);
  EXPECT_EQ(lambda(Sign::Lower, 15, 10, 7), 0);
  EXPECT_EQ(lambda(Sign::Upper, 3, 27, 7), -1);
  EXPECT_THROW(lambda(Sign::Upper, 9, 100, 50), domain_error);
  EXPECT_THROW(lambda(Sign::Upper, 6, 100, 50), domain_error);
  EXPECT_THROW(lambda(Sign::Upper, 53, 100, 50), domain_error);
}

TEST(Lambda, MatchesDefinitionOracle) {
  const auto ps = SieveDensity::odd_primes_below(60);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 5000; ++i) {
    std::vector<u64> chosen;
    u64 d = 1;
    for (u64 p : ps) {
      if (rng() % 4 == 0 && d < (1ULL << 50) / p) {
        chosen.push_back(p);
        d *= p;
      }
    }
    std::reverse(chosen.begin(), chosen.end());
    const double D = std::pow(10.0, 1 + static_cast<double>(rng() % 80) / 10);
    if (D < 60) continue;
    for (Sign s : {Sign::Lower, Sign::Upper}) ASSERT_EQ(lambda(s, d, D, 60), lambda_oracle(s, chosen, D)) << d;
  }
}

TEST(Weights, SupportPropertiesAndTable) {
  for (double D : {50.0, 1e3, 1e5}) {
    for (Sign s : {Sign::Lower, Sign::Upper}) {
      const auto t = weight_table(s, D, std::min(D, 200.0));
      EXPECT_EQ(t(1), 1);
      for (const auto& [d, w] : t.weights) {
        ASSERT_LE(static_cast<double>(d), D);
        ASSERT_LE(std::abs(w), 1);
        ASSERT_NE(w, 0);
        ASSERT_EQ(w, lambda(s, d, D, std::min(D, 200.0)));
        ASSERT_EQ(w, moebius(d));
      }
    }
  }
}

TEST(Weights, TableIsCompleteForSmallLevel) {
  const double D = 2000, z = 40;
  const auto t = weight_table(Sign::Upper, D, z);
  const auto ps = SieveDensity::odd_primes_below(z);
  std::size_t nonzero = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << ps.size()); ++mask) {
    u64 d = 1;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (mask >> i & 1U) d *= ps[i];
    }
    if (lambda(Sign::Upper, d, D, z) != 0) ++nonzero;
  }
  EXPECT_EQ(t.weights.size(), nonzero);
}

TEST(Fundamental, Examples) {
  const auto one = fundamental_check(1, 100, 50);
  EXPECT_EQ(one.lower_sum, 1);
  EXPECT_EQ(one.upper_sum, 1);
  EXPECT_EQ(one.e_n, 1);
  const auto f15 = fundamental_check(15, 10, 7);
  EXPECT_EQ(f15.lower_sum, -1);
  EXPECT_EQ(f15.upper_sum, 1);
  EXPECT_EQ(f15.e_n, 0);
  u64 all = 1;
  for (u64 p : SieveDensity::odd_primes_below(40)) all *= p;
  EXPECT_NO_THROW(fundamental_check(all, 1e6, 40));
}

TEST(Fundamental, ExhaustiveOverSmallPrimes) {
  const auto ps = SieveDensity::odd_primes_below(40);
  for (double D : {1e2, 1e4, 1e6}) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << ps.size()); ++mask) {
      u64 n = 1;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        if (mask >> i & 1U) n *= ps[i];
      }
      const auto r = fundamental_check(n, D, 40);
      ASSERT_LE(r.lower_sum, r.e_n);
      ASSERT_GE(r.upper_sum, r.e_n);
    }
  }
}

TEST(SiftedSum, Examples) {
  const auto zero = SieveDensity::zero(100);
  EXPECT_EQ(sifted_sum(Sign::Lower, zero, 100, 1e4), 1.0L);
  EXPECT_EQ(sifted_sum(Sign::Upper, zero, 100, 1e4), 1.0L);
  SieveDensity one;
  one.primes = {3};
  one.g = {0.25};
  EXPECT_NEAR(static_cast<double>(sifted_sum(Sign::Lower, one, 5, 27)), 0.75, 1e-15);
  EXPECT_NEAR(static_cast<double>(sifted_sum(Sign::Upper, one, 5, 27)), 0.75, 1e-15);
  SieveDensity bad = one;
  bad.g = {1.0};
  EXPECT_THROW(sifted_sum(Sign::Upper, bad, 5, 27), domain_error);
  EXPECT_THROW(sifted_sum(Sign::Upper, one, 5, 4), domain_error);
}

TEST(SiftedSum, MatchesSubsetEnumeration) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto dens = SieveDensity::random(60, seed);
    for (double D : {60.0, 500.0, 1e4, 1e6}) {
      for (Sign s : {Sign::Lower, Sign::Upper}) {
        ASSERT_NEAR(static_cast<double>(sifted_sum(s, dens, 60, D)),
                    static_cast<double>(brute_sifted(s, dens, D)), 1e-12);
      }
    }
  }
}

TEST(SiftedSum, SandwichRandomDensities) {
  std::mt19937_64 rng(77);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const double z = 10 + static_cast<double>(rng() % 500);
    const double D = z * std::pow(z, static_cast<double>(rng() % 200) / 100.0);
    const auto dens = SieveDensity::random(z, seed);
    const long double V = dens.product();
    ASSERT_LE(sifted_sum(Sign::Lower, dens, z, D), V + 1e-15L) << seed;
    ASSERT_GE(sifted_sum(Sign::Upper, dens, z, D), V - 1e-15L) << seed;
  }
}

TEST(SiftedSum, SandwichForSieveDensity) {
  for (u64 N : {u64{1'000'001}, u64{123'456'789'013ULL}}) {
    const auto om = omega_density(N, 12, 1000);
    SieveDensity dens;
    dens.primes = om.primes;
    dens.g = om.relative();
    const long double V = dens.product();
    EXPECT_NEAR(static_cast<double>(V), static_cast<double>(sieve_product_V(1000, N, 12)), 1e-12);
    EXPECT_LE(sifted_sum(Sign::Lower, dens, 1000, 1e9), V);
    EXPECT_GE(sifted_sum(Sign::Upper, dens, 1000, 1e9), V);
  }
}

TEST(SiftedSum, RatioTrendDiagnostic) {
  for (double z : {50.0, 200.0, 1000.0}) {
    const auto dens = SieveDensity::uniform(z);
    const long double V = dens.product();
    const double lo = static_cast<double>(sifted_sum(Sign::Lower, dens, z, z * z * z) / V);
    const double hi = static_cast<double>(sifted_sum(Sign::Upper, dens, z, z * z * z) / V);
    RecordProperty("ratios_z" + std::to_string(static_cast<int>(z)), std::to_string(lo) + "," + std::to_string(hi));
    EXPECT_LE(lo, 1.0);
    EXPECT_GE(hi, 1.0);
  }
}

TEST(Rosser, LevelChecks) {
  EXPECT_THROW(lambda(Sign::Upper, 1, 1, 3), domain_error);
  EXPECT_THROW(lambda(Sign::Upper, 1, 100, 2), domain_error);
  EXPECT_THROW(lambda(Sign::Upper, 1, 100, 101), domain_error);
  EXPECT_STREQ(to_string(Sign::Lower), "lower");
}
