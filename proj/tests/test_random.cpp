#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "ucpd/parallel.hpp"
#include "ucpd/random.hpp"

namespace ucpd {
namespace {

TEST(Philox, KnownAnswerVectors) {
  // Random123 kat_vectors for philox4x32_10.
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(NormalQuantile, MatchesErfcInverse) {
  for (double p : {1e-300, 1e-20, 1e-10, 1e-5, 0.01, 0.075, 0.2, 0.5, 0.8, 0.925, 0.99, 1 - 1e-10}) {
    const double z = normal_quantile(p);
    const double back = 0.5 * std::erfc(-z / std::sqrt(2.0));
    EXPECT_NEAR(back / p, 1.0, 1e-12) << "p=" << p;
  }
  EXPECT_EQ(normal_quantile(0.5), 0.0);
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-14);
}

TEST(NormalQuantile, Antisymmetric) {
  // Dyadic p so that 1 - p is exact.
  for (double p : {0x1p-40, 0x1p-10, 0.3125, 0.4375}) EXPECT_DOUBLE_EQ(normal_quantile(p), -normal_quantile(1.0 - p));
}

TEST(CounterStream, UniformIsOpenAndDeterministic) {
  CounterStream a(42, 7);
  CounterStream b(42, 7);
  for (int i = 0; i < 10000; ++i) {
    const double u = a.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_EQ(u, b.uniform());
  }
}

TEST(CounterStream, DistinctStreamsDiffer) {
  std::set<double> firsts;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    firsts.insert(CounterStream(1, rep).uniform());
    firsts.insert(CounterStream(1, rep, StreamTag::SegmentAfter).uniform());
  }
  firsts.insert(CounterStream(2, 0).uniform());
  EXPECT_EQ(firsts.size(), 201u);
}

TEST(CounterStream, NormalMoments) {
  CounterStream s(3, 0);
  const int n = 200000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sq / n - mean * mean, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 57) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

}  // namespace
}  // namespace ucpd
