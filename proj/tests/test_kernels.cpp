#include <gtest/gtest.h>

#include <cmath>

#include "ucpd/errors.hpp"
#include "ucpd/kernels.hpp"
#include "ucpd/random.hpp"

namespace ucpd {
namespace {

TEST(BuiltinKernel, Definitions) {
  EXPECT_EQ(builtin_kernel("product")(2, 3), 6);
  EXPECT_EQ(builtin_kernel("sign_diff")(1, 1), 0);
  EXPECT_EQ(builtin_kernel("half_sq_diff")(1, 4), 4.5);
  EXPECT_EQ(builtin_kernel("abs_diff")(1, 4), 3);
  EXPECT_EQ(builtin_kernel("sign_sum")(-2, 1), -1);
  EXPECT_EQ(builtin_kernel("sign_sum")(-1, 1), 0);
  EXPECT_EQ(builtin_kernel("diff")(5, 2), 3);
  EXPECT_EQ(builtin_kernel("sign_diff")(5, 2), 1);
}

TEST(BuiltinKernel, SymmetryClasses) {
  for (const auto& id : {"product", "half_sq_diff", "abs_diff", "sign_sum"})
    EXPECT_EQ(builtin_kernel(id).symmetry(), Symmetry::Symmetric) << id;
  for (const auto& id : {"diff", "sign_diff"})
    EXPECT_EQ(builtin_kernel(id).symmetry(), Symmetry::Antisymmetric) << id;
}

TEST(BuiltinKernel, UnknownIdThrows) {
  try {
    builtin_kernel("cosine");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownKernel);
  }
}

TEST(CheckSymmetry, BuiltinsAreExact) {
  for (const auto& id : builtin_kernel_ids()) {
    const auto report = check_symmetry(builtin_kernel(id), 100, 7);
    EXPECT_TRUE(report.consistent) << id;
    EXPECT_EQ(report.worst_violation, 0.0) << id;
  }
}

TEST(CheckSymmetry, DetectsMisdeclaredKernel) {
  Kernel wrong("bad", [](double x, double y) { return x - y; }, Symmetry::Symmetric);
  const auto report = check_symmetry(wrong, 100, 7);
  EXPECT_FALSE(report.consistent);
  EXPECT_GT(report.worst_violation, 0.0);
}

TEST(CheckSymmetry, DetectsNonzeroDiagonalForAntisymmetric) {
  Kernel wrong("bad", [](double x, double y) { return x - y + 1.0; }, Symmetry::Antisymmetric);
  EXPECT_FALSE(check_symmetry(wrong, 10, 1).consistent);
}

struct ProjectionCase {
  const char* kernel;
  Distribution dist;
  double theta;
  double sigma2;
};

// Fixture values from elementary integration; each is confirmed by the
// Monte Carlo oracle below before being relied on elsewhere.
class AnalyticProjectionTest : public ::testing::TestWithParam<ProjectionCase> {};

TEST_P(AnalyticProjectionTest, MonteCarloAgreesWithinFourStandardErrors) {
  const auto& c = GetParam();
  const Kernel k = builtin_kernel(c.kernel);
  const auto proj = k.projection(c.dist);
  ASSERT_TRUE(proj.has_value());
  EXPECT_DOUBLE_EQ(proj->theta, c.theta);
  EXPECT_NEAR(proj->sigma2, c.sigma2, 1e-12);

  CounterStream rng(2024, 0, StreamTag::Probe);
  const int draws = 100000;
  double sh = 0, sh2 = 0, sg = 0, sg2 = 0, sgg = 0, sgg2 = 0;
  for (int i = 0; i < draws; ++i) {
    const double x = c.dist.quantile(rng.uniform());
    const double y = c.dist.quantile(rng.uniform());
    const double h = k(x, y);
    const double g = proj->g(x);
    sh += h;
    sh2 += h * h;
    sg += g;
    sg2 += g * g;
    sgg += g * g;
    sgg2 += g * g * g * g;
  }
  auto check = [&](double sum, double sum_sq, double target, const char* what) {
    const double mean = sum / draws;
    const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
    EXPECT_LE(std::fabs(mean - target), 4.0 * se + 1e-12) << c.kernel << " " << what << " mean " << mean;
  };
  check(sh, sh2, c.theta, "E h");
  check(sg, sg2, 0.0, "E g");
  check(sgg, sgg2, c.sigma2, "E g^2");
}

INSTANTIATE_TEST_SUITE_P(
    Fixtures, AnalyticProjectionTest,
    ::testing::Values(ProjectionCase{"product", Distribution::normal(1, 1), 1.0, 1.0},
                      ProjectionCase{"half_sq_diff", Distribution::normal(0, 1), 1.0, 0.5},
                      ProjectionCase{"half_sq_diff", Distribution::uniform(0, 1), 1.0 / 12, 1.0 / 720},
                      ProjectionCase{"diff", Distribution::normal(2, 3), 0.0, 9.0},
                      ProjectionCase{"diff", Distribution::uniform(-1, 3), 0.0, 16.0 / 12},
                      ProjectionCase{"sign_diff", Distribution::normal(0, 1), 0.0, 1.0 / 3},
                      ProjectionCase{"sign_diff", Distribution::student_t(3), 0.0, 1.0 / 3},
                      ProjectionCase{"sign_diff", Distribution::pareto_symmetric(1.5), 0.0, 1.0 / 3}));

TEST(AnalyticProjection, GFormulas) {
  EXPECT_DOUBLE_EQ(builtin_kernel("product").projection(Distribution::normal(1, 1))->g(3.0), 2.0);
  EXPECT_DOUBLE_EQ(builtin_kernel("half_sq_diff").projection(Distribution::normal(0, 1))->g(3.0), 4.0);
  EXPECT_DOUBLE_EQ(builtin_kernel("diff").projection(Distribution::normal(0.5, 1))->g(2.0), -1.5);
  EXPECT_DOUBLE_EQ(builtin_kernel("sign_diff").projection(Distribution::uniform(0, 1))->g(0.25), 0.5);
}

TEST(AnalyticProjection, InfiniteVarianceSentinel) {
  const auto proj = builtin_kernel("diff").projection(Distribution::student_t(2));
  ASSERT_TRUE(proj.has_value());
  EXPECT_TRUE(std::isinf(proj->sigma2));
}

TEST(AnalyticProjection, AbsentWhereNoClosedForm) {
  EXPECT_FALSE(builtin_kernel("abs_diff").projection(Distribution::normal()).has_value());
  EXPECT_FALSE(builtin_kernel("sign_sum").projection(Distribution::normal()).has_value());
  EXPECT_FALSE(builtin_kernel("diff").projection(Distribution::student_t(1)).has_value());
}

}  // namespace
}  // namespace ucpd
