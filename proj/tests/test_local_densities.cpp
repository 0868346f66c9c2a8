#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "wg/local_densities.hpp"

using namespace wg;

namespace {

struct Brute {
  std::vector<u64> L, K, Lstar;
};

// literal loops over units for u_j and over 1..p for x
Brute brute(u64 p, unsigned b) {
  Brute out{std::vector<u64>(p), std::vector<u64>(p), std::vector<u64>(p)};
  for (u64 x = 0; x <= p; ++x) {  // x = 0 marks the K count
    for (u64 u1 = 1; u1 < p; ++u1)
      for (u64 u2 = 1; u2 < p; ++u2)
        for (u64 u3 = 1; u3 < p; ++u3)
          for (u64 u4 = 1; u4 < p; ++u4)
            for (u64 u5 = 1; u5 < p; ++u5)
              for (u64 u6 = 1; u6 < p; ++u6) {
                const u64 rest = powmod(u1, 3, p) + powmod(u2, 3, p) + powmod(u3, 3, p) + powmod(u4, 3, p) +
                                 powmod(u5, 4, p) + powmod(u6, b, p);
                if (x == 0) {
                  ++out.K[rest % p];
                } else {
                  const u64 n = (rest + x * x) % p;
                  ++out.L[n];
                  if (x % p != 0) ++out.Lstar[n];
                }
              }
  }
  return out;
}

}  // namespace

TEST(LocalCounts, HandExamples) {
  EXPECT_EQ(count_K(2, 1, 12), u128{0});
  EXPECT_EQ(count_Lstar(2, 1, 12), u128{1});
  EXPECT_EQ(count_L(2, 1, 12), u128{1});
  EXPECT_EQ(count_K(3, 1, 12), u128{20});
  EXPECT_EQ(count_Lstar(3, 1, 12), u128{40});
  EXPECT_EQ(count_L(3, 1, 12), u128{60});
  const auto e = error_term(3, 1, 12);
  EXPECT_EQ(e.Ep, i128{-8});
  EXPECT_NEAR(e.bound, 4 * (std::sqrt(3.0) + 1) * std::pow(2 * std::sqrt(3.0) + 1, 4) * (3 * std::sqrt(3.0) + 1), 1e-6);
  EXPECT_NEAR(e.bound, 2.69e4, 0.01e4);
  EXPECT_EQ(error_term(2, 1, 12).Ep, i128{1});
}

TEST(LocalCounts, MatchLoopEnumeration) {
  for (u64 p : {3, 5, 7}) {
    for (unsigned b : {12u, 13u, 18u, 24u, 35u}) {
      const auto br = brute(p, b);
      for (u64 n = 0; n < p; ++n) {
        ASSERT_EQ(count_K(p, n, b), u128{br.K[n]}) << p << " " << n << " " << b;
        ASSERT_EQ(count_Lstar(p, n, b), u128{br.Lstar[n]});
        ASSERT_EQ(count_L(p, n, b), u128{br.L[n]});
      }
    }
  }
}

TEST(LocalCounts, ArgumentErrors) {
  EXPECT_THROW(count_K(9, 1, 12), domain_error);
  EXPECT_THROW(count_K(7, 7, 12), domain_error);
  EXPECT_THROW(count_K(7, 1, 11), domain_error);
  EXPECT_THROW(count_K(7, 1, 36), domain_error);
  EXPECT_THROW(count_K(100'003, 1, 12), bounds_error);
}

TEST(LocalCounts, RoutesAgree) {
  std::vector<u64> ps;
  for (u64 p : primes_up_to(250)) {
    if (p > 2) ps.push_back(p);
  }
  for (u64 p : {601, 607, 613, 1009, 2003}) ps.push_back(p);
  for (u64 p : ps) {
    for (unsigned b : {12u, 17u, 24u, 35u}) {
      const auto a = route::by_convolution(p, b);
      const auto g = route::by_gauss_periods(p, b);
      for (u64 n = 0; n < p; ++n) {
        ASSERT_EQ(a.L(n), g.L(n)) << p << " " << b << " " << n;
        ASSERT_EQ(a.K(n), g.K(n));
        ASSERT_EQ(a.Lstar(n), g.Lstar(n));
      }
    }
  }
}

TEST(LocalCounts, DecompositionAndPositivityToTenThousand) {
  for (u64 p : primes_up_to(10'000)) {
    for (unsigned b = 12; b <= 35; ++b) {
      const auto t = local_count_table(p, b);
      for (u64 n = p == 2 ? 1 : 0; n < p; ++n) {
        ASSERT_EQ(t->L(n), t->Lstar(n) + t->K(n)) << p << " " << b << " " << n;
        ASSERT_GE(t->Lstar(n), u128{1});
      }
    }
  }
}

TEST(LocalCounts, ErrorTermIdentityAndBound) {
  for (u64 p : primes_up_to(2000)) {
    for (unsigned b : {12u, 23u, 35u}) {
      for (u64 n = p == 2 ? 1 : 0; n < p; n += 1 + p / 40) {
        const auto c = local_counts(p, n, b);
        const i128 lhs = static_cast<i128>(p) * static_cast<i128>(c.Lstar);
        ASSERT_EQ(lhs, pow_i128(static_cast<i128>(p - 1), 7) + c.Ep);
        const double mag = static_cast<double>(c.Ep < 0 ? -c.Ep : c.Ep);
        ASSERT_LE(mag, c.Ep_bound);
        if (p >= 13) ASSERT_LT(mag, std::pow(static_cast<double>(p - 1), 7));
      }
    }
  }
}

TEST(LocalCounts, ExponentialSumIdentity) {
  std::mt19937_64 rng(9);
  for (u64 p : primes_up_to(200)) {
    for (int i = 0; i < 4; ++i) {
      const unsigned b = 12 + static_cast<unsigned>(rng() % 24);
      const u64 n = rng() % p;
      ASSERT_LE(expsum_identity_residual(p, n, b), 1e-6 * std::pow(static_cast<double>(p - 1), 7))
          << p << " " << n << " " << b;
    }
  }
}

TEST(LocalCounts, DependsOnlyOnClassOfB) {
  for (u64 p : {13, 29, 37, 101}) {
    for (unsigned b = 12; b <= 35; ++b) {
      for (unsigned b2 = b + 1; b2 <= 35; ++b2) {
        if ((b2 - b) % (p - 1) != 0) continue;
        for (u64 n = 0; n < p; ++n) ASSERT_EQ(count_Lstar(p, n, b), count_Lstar(p, n, b2));
      }
    }
  }
}

TEST(LocalCounts, AsymptoticDiagnostics) {
  double worst_L = 0, worst_K = 0;
  for (u64 p : primes_up_to(3000)) {
    if (p < 13) continue;
    const double pd = static_cast<double>(p);
    for (u64 n : {u64{0}, u64{1}, p - 1}) {
      worst_L = std::max(worst_L, std::abs(static_cast<double>(count_L(p, n, 12)) / std::pow(pd, 6) - 1) * pd);
      worst_K = std::max(worst_K, std::abs(static_cast<double>(count_K(p, n, 12)) / std::pow(pd, 5) - 1) * pd);
    }
  }
  RecordProperty("L_rel_dev_times_p", std::to_string(worst_L));
  RecordProperty("K_rel_dev_times_p", std::to_string(worst_K));
  EXPECT_LT(worst_L, 1e3);
  EXPECT_LT(worst_K, 1e3);
}

TEST(SmallPrimes, AllClassesPositive) {
  for (unsigned b = 12; b <= 35; ++b) {
    const auto r = verify_small_primes(b);
    EXPECT_EQ(r.size(), 27u);
    for (const auto& c : r) EXPECT_TRUE(c.pass) << "b=" << b << " p=" << c.p << " n=" << c.n_res;
  }
  const auto r12 = verify_small_primes(12);
  EXPECT_EQ(r12.front().p, 2u);
  EXPECT_EQ(r12.front().n_res, 1u);
  EXPECT_EQ(r12.front().Lstar, u128{1});
}
