#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ucpd/detector.hpp"
#include "ucpd/errors.hpp"
#include "ucpd/limitsim.hpp"
#include "ucpd/oracles.hpp"

namespace ucpd {
namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

template <class F>
Moments moments(std::size_t reps, F draw) {
  double s = 0.0, s2 = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    const double v = draw(r);
    s += v;
    s2 += v * v;
  }
  const double m = s / static_cast<double>(reps);
  return {m, s2 / static_cast<double>(reps) - m * m};
}

TEST(Wiener, StartsAtZeroWithCorrectVariances) {
  constexpr std::size_t G = 64, reps = 20000;
  std::vector<double> w1, wh, inc1, inc2;
  for (std::size_t r = 0; r < reps; ++r) {
    CounterStream s(3, r);
    const auto w = simulate_wiener(G, s);
    ASSERT_EQ(w.size(), G + 1);
    ASSERT_EQ(w[0], 0.0);
    w1.push_back(w[G]);
    wh.push_back(w[G / 2]);
    inc1.push_back(w[G / 4]);
    inc2.push_back(w[G / 2] - w[G / 4]);
  }
  const auto m1 = moments(reps, [&](std::size_t r) { return w1[r]; });
  const auto mh = moments(reps, [&](std::size_t r) { return wh[r]; });
  EXPECT_NEAR(m1.var, 1.0, 0.05);
  EXPECT_NEAR(mh.var, 0.5, 0.03);
  EXPECT_NEAR(m1.mean, 0.0, 0.03);
  const auto cov = moments(reps, [&](std::size_t r) { return inc1[r] * inc2[r]; });
  EXPECT_NEAR(cov.mean, 0.0, 0.01);
}

TEST(Wiener, CoarseGridIsNestedInFineGrid) {
  CounterStream a(9, 4), b(9, 4);
  const auto coarse = simulate_wiener(256, a);
  const auto fine = simulate_wiener(1024, b);
  for (std::size_t j = 0; j <= 256; ++j) EXPECT_EQ(coarse[j], fine[4 * j]);
}

TEST(Wiener, BadGrid) {
  CounterStream s(1, 0);
  for (std::size_t g : {0u, 1u, 3u, 100u}) {
    try {
      simulate_wiener(g, s);
      ADD_FAILURE() << g;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::BadGrid);
    }
  }
}

TEST(Processes, EndpointsArePinned) {
  CounterStream s(5, 0);
  const auto w = simulate_wiener(128, s);
  const auto g = gamma_path(w);
  const auto b = bridge_path(w);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(b.front(), 0.0);
  EXPECT_NEAR(g.back(), 0.0, 1e-15);
  EXPECT_NEAR(b.back(), 0.0, 1e-15);
}

TEST(Processes, GammaAndBridgeCovariances) {
  constexpr std::size_t G = 64, reps = 40000;
  double g25 = 0, g2575 = 0, b2575 = 0, b25 = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    CounterStream s(17, r);
    const auto w = simulate_wiener(G, s);
    const auto g = gamma_path(w);
    const auto b = bridge_path(w);
    g25 += g[16] * g[16];
    g2575 += g[16] * g[48];
    b25 += b[16] * b[16];
    b2575 += b[16] * b[48];
  }
  const double m = static_cast<double>(reps);
  EXPECT_NEAR(g25 / m, 0.1875, 0.01);
  EXPECT_NEAR(b25 / m, 0.1875, 0.01);
  EXPECT_NEAR(g2575 / m, 0.125, 0.01);
  EXPECT_NEAR(b2575 / m, 0.0625, 0.01);
}

TEST(Processes, SameMarginalAtAPoint) {
  constexpr std::size_t G = 64, reps = 20000;
  std::vector<double> gv, bv;
  for (std::size_t r = 0; r < reps; ++r) {
    CounterStream s1(23, r), s2(24, r);
    gv.push_back(gamma_path(simulate_wiener(G, s1))[19]);
    bv.push_back(bridge_path(simulate_wiener(G, s2))[19]);
  }
  EXPECT_LT(ks_two_sample(gv, bv), 0.03);
}

TEST(WeightedSup, Examples) {
  std::vector<double> zero(129, 0.0);
  EXPECT_EQ(weighted_sup(zero, constant_one()), 0.0);

  std::vector<double> spike(129, 0.0);
  spike[40] = -2.0;
  EXPECT_EQ(weighted_sup(spike, constant_one()), 2.0);

  std::vector<double> tt(129);
  for (std::size_t j = 0; j <= 128; ++j) {
    const double t = static_cast<double>(j) / 128.0;
    tt[j] = t * (1 - t);
  }
  EXPECT_NEAR(weighted_sup(tt, power_weight(0.25)), std::pow(0.25, 0.75), 1e-12);
  EXPECT_NEAR(weighted_sup(tt, power_weight(0.25)), 0.3536, 1e-4);
}

TEST(WeightedSup, EndpointsExcluded) {
  std::vector<double> path(17, 0.0);
  path[0] = 5.0;
  path[16] = 5.0;
  path[3] = 0.5;
  EXPECT_EQ(weighted_sup(path, power_weight(0.5)), 0.5 / std::sqrt(3.0 / 16 * 13.0 / 16));
}

TEST(EmpiricalQuantile, Type7) {
  const std::vector<double> v = {1, 2, 3, 4, 5};
  EXPECT_EQ(empirical_quantile(v, 0.0), 1.0);
  EXPECT_EQ(empirical_quantile(v, 1.0), 5.0);
  EXPECT_EQ(empirical_quantile(v, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(empirical_quantile(v, 0.9), 4.6);
}

TEST(LimitLaw, BridgeMatchesKolmogorov) {
  const auto law = build_limit_law(LimitProcess::Bridge, constant_one(), 2048, 20000, 42);
  EXPECT_NEAR(law.quantile(0.95), oracle::kolmogorov_quantile(0.95), 0.03);
  EXPECT_NEAR(oracle::kolmogorov_quantile(0.95), 1.3581, 1e-4);
  EXPECT_FALSE(law.low_reps_warning);
  EXPECT_TRUE(std::is_sorted(law.sorted_sups.begin(), law.sorted_sups.end()));
  for (std::size_t i = 0; i < kQuantileLevels.size(); ++i)
    EXPECT_EQ(law.quantiles[i], law.quantile(kQuantileLevels[i]));
}

TEST(LimitLaw, GridRefinementIsMonotoneAndSmall) {
  const auto coarse = build_limit_law(LimitProcess::Bridge, constant_one(), 1024, 10000, 7);
  const auto fine = build_limit_law(LimitProcess::Bridge, constant_one(), 2048, 10000, 7);
  for (std::size_t i = 0; i < coarse.sorted_sups.size(); ++i)
    ASSERT_LE(coarse.sorted_sups[i], fine.sorted_sups[i]);
  EXPECT_LE(fine.quantile(0.95) - coarse.quantile(0.95), 0.03);
}

TEST(LimitLaw, SeedIndependence) {
  const auto a = build_limit_law(LimitProcess::GammaProcess, constant_one(), 1024, 20000, 1);
  const auto b = build_limit_law(LimitProcess::GammaProcess, constant_one(), 1024, 20000, 2);
  EXPECT_NEAR(a.quantile(0.95), b.quantile(0.95), 0.02);
  EXPECT_NE(a.sorted_sups, b.sorted_sups);
}

TEST(LimitLaw, DeterministicAcrossWorkers) {
  const auto a = build_limit_law(LimitProcess::GammaProcess, power_weight(0.25), 256, 3000, 11, 1);
  const auto b = build_limit_law(LimitProcess::GammaProcess, power_weight(0.25), 256, 3000, 11, 8);
  EXPECT_EQ(a.sorted_sups, b.sorted_sups);
  EXPECT_EQ(a.weight, "pow:0.25");
}

TEST(LimitLaw, LowRepsWarningAndBadParams) {
  EXPECT_TRUE(build_limit_law(LimitProcess::Bridge, constant_one(), 64, 100, 1).low_reps_warning);
  EXPECT_THROW(build_limit_law(LimitProcess::Bridge, constant_one(), 64, 0, 1), Error);
  EXPECT_THROW(build_limit_law(LimitProcess::Bridge, constant_one(), 1000, 10, 1), Error);
}

TEST(LimitLaw, DivergentWeightGrowsWithGrid) {
  const auto q = power_weight(0.5);
  const auto coarse = build_limit_law(LimitProcess::Bridge, q, 1024, 2000, 5);
  const auto fine = build_limit_law(LimitProcess::Bridge, q, 4096, 2000, 5);
  const double m1 = coarse.quantile(0.5), m4 = fine.quantile(0.5);
  EXPECT_GT(m4, m1);
}

TEST(LimitLaw, DivergentWeightGrowsByTenPercentFrom1024To4096) {
  const auto q = power_weight(0.5);
  const double m1 = build_limit_law(LimitProcess::Bridge, q, 1024, 2000, 5).quantile(0.5);
  const double m4 = build_limit_law(LimitProcess::Bridge, q, 4096, 2000, 5).quantile(0.5);
  EXPECT_GT(m4, 1.1 * m1) << "median " << m1 << " -> " << m4;
}

TEST(PValue, AddOneConvention) {
  LimitLaw law;
  law.sorted_sups = {1, 2, 3, 4};
  law.reps = 4;
  EXPECT_DOUBLE_EQ(p_value(law, 10.0), 1.0 / 5.0);
  EXPECT_DOUBLE_EQ(p_value(law, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(p_value(law, 3.0), 3.0 / 5.0);
  EXPECT_DOUBLE_EQ(p_value(law, 2.5), 3.0 / 5.0);
}

}  // namespace
}  // namespace ucpd
