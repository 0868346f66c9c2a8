#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "wg/buchstab.hpp"
#include "wg/oracles.hpp"
#include "wg/reference_values.hpp"

using namespace wg;
namespace fs = std::filesystem;

namespace {

template <class F>
double simpson(F f, double a, double b, std::size_t panels) {
  const double h = (b - a) / static_cast<double>(panels);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) s += f(a + h * static_cast<double>(i)) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

double level_one(double T) {
  if (T <= 2) return 0.0;
  return simpson([](double u) { return std::log(u - 1) / u; }, 2, T, 4000);
}

class TempCache {
 public:
  TempCache() {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("wg-test-cache-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(dir_);
    buchstab_cache::set_directory(dir_.string());
    clear_memory_cache();
  }
  ~TempCache() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
    if (const char* env = std::getenv("WG_CACHE_DIR")) {
      buchstab_cache::set_directory(env);
    } else {
      buchstab_cache::set_directory((fs::temp_directory_path() / "wg-test-cache-default").string());
    }
    clear_memory_cache();
  }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
};

}  // namespace

TEST(Budget, Examples) {
  const auto b12 = budget(12);
  EXPECT_EQ(b12.s_b, BudgetRational(35));
  EXPECT_EQ(b12.M_b, 36);
  const auto b24 = budget(24);
  EXPECT_EQ(b24.s_b, BudgetRational(143));
  EXPECT_EQ(b24.M_b, 144);
  const auto b35 = budget(35);
  EXPECT_EQ(b35.s_b, BudgetRational(2519));
  EXPECT_EQ(b35.M_b, 2520);
  EXPECT_THROW(budget(11), domain_error);
  EXPECT_THROW(budget(36), domain_error);
}

TEST(Budget, ExponentIdentities) {
  for (unsigned b = 12; b <= 35; ++b) {
    const auto sb = budget(b);
    EXPECT_EQ(sb.s_b + 1, sb.U2_exponent / sb.z_exponent);
    EXPECT_EQ(sb.s_b, BudgetRational(72 * b, 36 - b) - 1);
    EXPECT_GT(sb.D_exponent, 0);
    EXPECT_EQ(sb.z_exponent * 3, sb.D_exponent);
  }
}

TEST(IteratedIntegral, EmptyDomain) {
  EXPECT_EQ(iterated_integral(5, 4.0, 1e-9).point, 0.0);
  EXPECT_EQ(iterated_integral(3, 2.0, 1e-9).hi, 0.0);
  EXPECT_EQ(c_r(37, 12, 1e-9).point, 0.0);
  EXPECT_THROW(iterated_integral(2, 10, 1e-9), domain_error);
  EXPECT_THROW(iterated_integral(3, 10, 0), domain_error);
}

TEST(IteratedIntegral, DepthOneAgainstSimpson) {
  const double oracle = simpson([](double t) { return std::log(t - 1) / t; }, 2, 35, 1'000'000);
  const auto v = iterated_integral(3, 35, 1e-10);
  EXPECT_LE(v.width(), 1e-10);
  EXPECT_NEAR(v.point, oracle, 1e-10);
  EXPECT_NEAR(c_r(3, 12, 1e-9).point, oracle, 1e-9);
}

TEST(IteratedIntegral, DepthTwoAgainstTensorSimpson) {
  const double oracle = simpson([](double t1) { return level_one(t1 - 1) / t1; }, 3, 10, 2000);
  const auto v = iterated_integral(4, 10, 1e-8);
  EXPECT_NEAR(v.point, oracle, 1e-8);
}

TEST(IteratedIntegral, AgreesWithNestedGaussLegendre) {
  for (unsigned b : {12u, 24u, 35u}) {
    for (unsigned r : {3u, 4u, 5u}) {
      const double lv = c_r(r, b, 1e-9).point;
      const double tn = tensor_iterated_integral(r, budget(b).s(), 40);
      EXPECT_NEAR(lv / tn, 1.0, 1e-4) << "b=" << b << " r=" << r;
    }
  }
}

TEST(IteratedIntegral, RandomUpperLimitsAgreeWithNestedGaussLegendre) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> S(6.0, 300.0);
  for (int i = 0; i < 12; ++i) {
    const double s = S(rng);
    for (unsigned r : {3u, 4u, 5u}) {
      const double lv = iterated_integral(r, s, 1e-9).point;
      const double tn = tensor_iterated_integral(r, s, 40);
      ASSERT_NEAR(lv, tn, 1e-6 * std::max(1.0, tn)) << "s=" << s << " r=" << r;
    }
  }
}

TEST(Levels, StartAtZeroAndNondecreasing) {
  const auto tw = buchstab_tower(20, 1e-9);
  ASSERT_GE(tw->depth(), 5u);
  for (const auto& lv : tw->levels) {
    EXPECT_EQ(lv(lv.lower()), 0.0);
    double prev = 0;
    const double step = (lv.upper - lv.lower()) / 400;
    for (int i = 1; i <= 400; ++i) {
      const double v = lv(lv.lower() + step * i);
      ASSERT_GE(v + lv.error_bound(v) + 1e-300, prev - lv.error_bound(prev)) << "level " << lv.level;
      prev = v;
    }
  }
}

TEST(Coefficients, PositiveAndVanishingPastTheBudget) {
  for (unsigned b : {12u, 13u, 30u}) {
    const auto sb = budget(b);
    for (long long r = 3; r <= sb.M_b + 3; ++r) {
      const auto v = c_r(static_cast<unsigned>(r), b, 1e-9);
      ASSERT_GE(v.lo, 0.0);
      if (static_cast<double>(r - 1) >= sb.s()) {
        ASSERT_EQ(v.hi, 0.0) << b << " " << r;
      } else if (r < 10) {
        ASSERT_GT(v.point, 0.0);
      }
    }
  }
  const auto c7 = c_r(7, 12, 1e-9);
  EXPECT_GT(c7.point, 0.0);
  EXPECT_LT(c7.point, 0.6814);
}

TEST(Coefficients, RefinementStability) {
  for (unsigned b : {12u, 26u}) {
    const double tol = 1e-6;
    for (unsigned r = 3; r <= budget(b).M_b; r += 1) {
      const double a = c_r(r, b, tol).point;
      const double c = c_r(r, b, tol / 2).point;
      ASSERT_LE(std::abs(a - c), tol) << b << " " << r;
    }
  }
}

TEST(CTotal, Examples) {
  const auto c12 = C_total(12, 6, 1e-9);
  EXPECT_LE(c12.point, reference::c_bound(12));
  EXPECT_LE(c12.lo, c12.point);
  EXPECT_LE(c12.point, c12.hi);
  const auto c35 = C_total(35, 17, 1e-9);
  EXPECT_LE(c35.point, reference::c_bound(35));
  EXPECT_EQ(C_total(12, 36, 1e-9).hi, 0.0);
  EXPECT_THROW(C_total(12, 1, 1e-9), domain_error);
}

TEST(CTotal, MonotoneInStartingOrder) {
  for (unsigned b : {14u, 29u}) {
    double prev = std::numeric_limits<double>::infinity();
    for (unsigned r = 3; r <= 25; ++r) {
      const auto c = C_total(b, r, 1e-9);
      ASSERT_LE(c.point, prev);
      prev = c.point;
    }
  }
}

TEST(CTotal, TailBoundCoversDirectSum) {
  // past-cut majorant against actually building the deeper levels with a smaller cut
  const double s = budget(33).s();
  const auto tw = detail::tower(s, 1e-9, 0);
  ASSERT_TRUE(tw->truncated);
  const auto deep = detail::build_tower(s, tw->tol, tw->cut * 1e-20, 0);
  ASSERT_GT(deep.depth(), tw->depth());
  double deeper = 0;
  for (unsigned j = tw->depth() + 1; j <= deep.depth(); ++j) deeper += deep.value(j).point;
  EXPECT_LE(deeper, tw->past_cut_sum_bound());
}

TEST(SieveFunctions, ClosedForms) {
  EXPECT_NEAR(sieve_f(3) / sieve_F(3), std::log(2.0), 1e-15);
  EXPECT_NEAR(sieve_F(3), 2 * std::exp(0.57721566490153286061) / 3, 1e-15);
  EXPECT_EQ(sieve_f(2), 0.0);
  EXPECT_THROW(sieve_F(3.5), domain_error);
  EXPECT_THROW(sieve_f(1.5), domain_error);
}

TEST(MinR, PublishedOrders) {
  EXPECT_EQ(min_r(12, 1e-9), 6u);
  EXPECT_EQ(min_r(35, 1e-9), 17u);
  EXPECT_EQ(min_r(20, 1e-9), 9u);
}

TEST(MinR, NeverExceedsPublishedOrder) {
  for (unsigned b = 12; b <= 35; ++b) EXPECT_LE(min_r(b, 1e-9), reference::almost_prime_order(b)) << b;
}

TEST(LuMu, Table) {
  EXPECT_EQ(lumu_r(4, 12), 24u);
  EXPECT_EQ(lumu_r(4, 24), 96u);
  EXPECT_EQ(lumu_r(4, 35), 1680u);
  for (unsigned b = 12; b <= 35; ++b) EXPECT_EQ(lumu_r(4, b), reference::lumu_order(b)) << b;
  EXPECT_THROW(lumu_r(4, 36), domain_error);
  EXPECT_THROW(lumu_r(4, 11), domain_error);
  EXPECT_THROW(lumu_r(0, 12), domain_error);
}

TEST(Cache, RoundTripAndFileLayout) {
  TempCache tc;
  const auto first = C_total(12, 6, 1e-7);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(tc.dir())) {
    ++files;
    std::ifstream in(e.path());
    const auto j = nlohmann::json::parse(in);
    for (const char* key : {"schema_version", "b", "level", "panel_breakpoints", "coefficients", "sup_error", "checksum"}) {
      EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["schema_version"].get<int>(), buchstab_cache::kSchemaVersion);
  }
  EXPECT_GT(files, 10u);
  clear_memory_cache();
  const auto second = C_total(12, 6, 1e-7);
  EXPECT_EQ(first.point, second.point);
  EXPECT_EQ(first.hi, second.hi);
}

TEST(Cache, CorruptFilesAreRecomputed) {
  TempCache tc;
  const auto ref = C_total(13, 7, 1e-7);
  const auto tw = buchstab_tower(13, 1e-7);
  const auto f1 = buchstab_cache::file_for(tc.dir(), 13, 1, tw->tol);
  const auto f3 = buchstab_cache::file_for(tc.dir(), 13, 3, tw->tol);
  const auto f5 = buchstab_cache::file_for(tc.dir(), 13, 5, tw->tol);
  ASSERT_TRUE(fs::exists(f1) && fs::exists(f3) && fs::exists(f5));

  { std::ofstream(f1) << "{ not json"; }
  {
    std::ifstream in(f3);
    auto j = nlohmann::json::parse(in);
    j["coefficients"][0][0] = j["coefficients"][0][0].get<double>() + 1.0;  // stale checksum
    std::ofstream(f3) << j.dump();
  }
  {
    std::ifstream in(f5);
    auto j = nlohmann::json::parse(in);
    j["schema_version"] = buchstab_cache::kSchemaVersion + 1;
    std::ofstream(f5) << j.dump();
  }
  clear_memory_cache();
  const auto again = C_total(13, 7, 1e-7);
  EXPECT_EQ(ref.point, again.point);
  EXPECT_EQ(ref.hi, again.hi);
  for (const auto& f : {f1, f3, f5}) {
    std::ifstream in(f);
    const auto j = nlohmann::json::parse(in, nullptr, false);
    ASSERT_FALSE(j.is_discarded());
    const auto lv = buchstab_cache::from_json(j, 13, static_cast<unsigned>(j["level"].get<int>()), tw->tol, tw->s);
    EXPECT_TRUE(lv.has_value()) << f;
  }
}

TEST(Cache, DisabledCacheWritesNothing) {
  TempCache tc;
  buchstab_cache::set_enabled(false);
  clear_memory_cache();
  C_total(15, 7, 1e-7);
  buchstab_cache::set_enabled(true);
  EXPECT_TRUE(fs::is_empty(tc.dir()));
}
