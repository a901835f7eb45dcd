#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "ucpd/detector.hpp"
#include "ucpd/errors.hpp"

namespace ucpd {
namespace {

// Pinned from a reference run of ShiftAtThirty (seed 388, 500 reps).
constexpr double kPinnedMedianError = 0.00074812967581044942;

const LimitLaw& bridge_law() {
  static const LimitLaw law = build_limit_law(LimitProcess::Bridge, constant_one(), 1024, 2000, 42);
  return law;
}

const LimitLaw& gamma_law() {
  static const LimitLaw law = build_limit_law(LimitProcess::GammaProcess, constant_one(), 1024, 2000, 43);
  return law;
}

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  CounterStream rng(seed, 0, StreamTag::Probe);
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal();
  return x;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ucpd::Error thrown";
  return ErrorCode::IoError;
}

TEST(FirstArgmax, TieBreak) {
  std::vector<double> v(12, 0.0);
  v[6] = 4.0;
  EXPECT_EQ(first_argmax(v), 7u);
  v[2] = 4.0;
  v[8] = 4.0;
  EXPECT_EQ(first_argmax(v), 3u);
}

TEST(EstimateChangepoint, ProjectsFields) {
  TestResult r;
  r.k_hat = 9;
  r.t_hat = 0.09;
  EXPECT_EQ(estimate_changepoint(r), (std::pair<std::size_t, double>{9, 0.09}));
}

TEST(RunTest, AscendingSampleRejects) {
  std::vector<double> x(100);
  for (std::size_t i = 0; i < 100; ++i) x[i] = static_cast<double>(i);
  const Kernel k = builtin_kernel("sign_diff");
  ProcessPath path;
  const auto r = run_test(Sample(x), k, constant_one(), 0.05, bridge_law(), &path);
  EXPECT_TRUE(r.reject);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0 / 2001.0);
  EXPECT_EQ(r.k_hat, 50u);
  EXPECT_DOUBLE_EQ(r.t_hat, 50.0 / 101.0);
  ASSERT_EQ(path.u.size(), 99u);
  double top = 0.0;
  for (double u : path.u) top = std::max(top, std::fabs(u));
  EXPECT_EQ(r.statistic, top);
  EXPECT_EQ(std::fabs(path.u[49]), top);
  EXPECT_EQ(r.n, 100u);
  EXPECT_EQ(r.kernel_id, "sign_diff");
  EXPECT_EQ(r.law_reps, 2000u);
  EXPECT_EQ(r.critical_value, bridge_law().quantile(0.95));
}

TEST(RunTest, LawMismatch) {
  const Sample s(noise(50, 1));
  EXPECT_EQ(code_of([&] { run_test(s, builtin_kernel("product"), constant_one(), 0.05, bridge_law()); }),
            ErrorCode::LawMismatch);
  EXPECT_EQ(code_of([&] { run_test(s, builtin_kernel("diff"), constant_one(), 0.05, gamma_law()); }),
            ErrorCode::LawMismatch);
  EXPECT_EQ(code_of([&] { run_test(s, builtin_kernel("diff"), power_weight(0.25), 0.05, bridge_law()); }),
            ErrorCode::LawMismatch);
  LimitLaw empty = bridge_law();
  empty.sorted_sups.clear();
  EXPECT_EQ(code_of([&] { run_test(s, builtin_kernel("diff"), constant_one(), 0.05, empty); }),
            ErrorCode::LawMismatch);
}

TEST(RunTest, AlphaRange) {
  const Sample s(noise(50, 2));
  for (double a : {0.0, -0.1, 0.51, 1.0})
    EXPECT_EQ(code_of([&] { run_test(s, builtin_kernel("diff"), constant_one(), a, bridge_law()); }),
              ErrorCode::BadParams);
  EXPECT_NO_THROW(run_test(s, builtin_kernel("diff"), constant_one(), 0.5, bridge_law()));
}

TEST(RunTest, SignDiffTransformInvariance) {
  const auto x = noise(120, 3);
  std::vector<double> y(x.size());
  std::transform(x.begin(), x.end(), y.begin(), [](double v) { return std::atan(v) * 7.0 - 2.0; });
  const Kernel k = builtin_kernel("sign_diff");
  const auto a = run_test(Sample(x), k, constant_one(), 0.05, bridge_law());
  const auto b = run_test(Sample(y), k, constant_one(), 0.05, bridge_law());
  EXPECT_EQ(a.statistic, b.statistic);
  EXPECT_EQ(a.k_hat, b.k_hat);
}

TEST(RunTest, DiffLocationScaleInvariance) {
  const auto x = noise(120, 4);
  std::vector<double> y(x.size());
  std::transform(x.begin(), x.end(), y.begin(), [](double v) { return 3.5 * v + 100.0; });
  const Kernel k = builtin_kernel("diff");
  const auto a = run_test(Sample(x), k, constant_one(), 0.05, bridge_law());
  const auto b = run_test(Sample(y), k, constant_one(), 0.05, bridge_law());
  EXPECT_NEAR(a.statistic, b.statistic, 1e-9);
  EXPECT_EQ(a.k_hat, b.k_hat);
}

TEST(Scenario, ValidationAndChangeIndex) {
  ScenarioSpec s;
  s.n = 400;
  EXPECT_EQ(s.change_index(), 400u);
  s.after = Distribution::normal(2, 1);
  s.change_fraction = 0.3;
  EXPECT_EQ(s.change_index(), 120u);
  EXPECT_NO_THROW(s.validate());
  s.change_fraction = 1.0;
  EXPECT_THROW(s.validate(), Error);
  s.change_fraction = 0.3;
  s.n = 2;
  EXPECT_THROW(s.validate(), Error);
  s.n = 400;
  s.kernel_id = "nope";
  EXPECT_THROW(s.validate(), Error);
}

TEST(Scenario, GenerateIsDeterministicAndSegmented) {
  ScenarioSpec s;
  s.n = 200;
  s.after = Distribution::normal(50, 1);
  s.change_fraction = 0.25;
  s.master_seed = 9;
  const auto a = generate_sample(s, 3);
  const auto b = generate_sample(s, 3);
  const auto vec = [](const Sample& x) { return std::vector<double>(x.values().begin(), x.values().end()); };
  EXPECT_EQ(vec(a), vec(b));
  EXPECT_NE(vec(a), vec(generate_sample(s, 4)));
  for (std::size_t i = 0; i < 200; ++i) EXPECT_EQ(a.values()[i] > 25.0, i >= 50) << i;
}

TEST(Scenario, MomentCertification) {
  ScenarioSpec s;
  s.before = Distribution::student_t(2.0);
  EXPECT_TRUE(moment_condition_certified(s, builtin_kernel("diff")));
  EXPECT_TRUE(moment_condition_certified(s, builtin_kernel("sign_diff")));
  EXPECT_FALSE(moment_condition_certified(s, builtin_kernel("half_sq_diff")));
  s.before = Distribution::pareto_symmetric(1.5);
  EXPECT_FALSE(moment_condition_certified(s, builtin_kernel("diff")));
  s.before = Distribution::normal();
  s.after = Distribution::pareto_symmetric(1.2);
  s.change_fraction = 0.5;
  EXPECT_FALSE(moment_condition_certified(s, builtin_kernel("product")));
  EXPECT_TRUE(moment_condition_certified(s, builtin_kernel("sign_sum")));
}

TEST(Experiment, NullSizeIsReasonable) {
  ScenarioSpec s;
  s.n = 200;
  s.kernel_id = "diff";
  s.reps = 400;
  s.master_seed = 12;
  const auto rep = size_power_experiment(s, 0.05, bridge_law());
  EXPECT_FALSE(rep.change);
  EXPECT_EQ(rep.statistics.size(), 400u);
  EXPECT_FALSE(rep.median_abs_error_of_t_hat.has_value());
  EXPECT_GE(rep.reject_rate, 0.01);
  EXPECT_LE(rep.reject_rate, 0.10);
  EXPECT_LT(rep.ks_distance_of_statistic_to_law, 0.12);
}

TEST(Experiment, DeterministicAcrossWorkers) {
  ScenarioSpec s;
  s.n = 150;
  s.kernel_id = "sign_diff";
  s.after = Distribution::normal(0.5, 1);
  s.change_fraction = 0.4;
  s.reps = 200;
  s.master_seed = 13;
  const auto a = size_power_experiment(s, 0.05, bridge_law(), 1);
  const auto b = size_power_experiment(s, 0.05, bridge_law(), 8);
  EXPECT_EQ(a.statistics, b.statistics);
  EXPECT_EQ(a.t_hats, b.t_hats);
  EXPECT_EQ(a.reject_rate, b.reject_rate);
}

TEST(Experiment, TooFewReps) {
  ScenarioSpec s;
  s.reps = 199;
  EXPECT_EQ(code_of([&] { size_power_experiment(s, 0.05, bridge_law()); }), ErrorCode::BadParams);
}

TEST(Experiment, ShiftAtThirty) {
  ScenarioSpec s;
  s.n = 400;
  s.kernel_id = "diff";
  s.after = Distribution::normal(2, 1);
  s.change_fraction = 0.3;
  s.reps = 500;
  s.master_seed = 388;
  const auto rep = size_power_experiment(s, 0.05, bridge_law());
  ASSERT_TRUE(rep.median_abs_error_of_t_hat.has_value());
  const double med = *rep.median_abs_error_of_t_hat;
  EXPECT_LE(med, 0.05);
  EXPECT_EQ(med, kPinnedMedianError) << std::setprecision(17) << med;
  EXPECT_EQ(rep.reject_rate, 1.0);
}

TEST(KsTwoSample, Examples) {
  EXPECT_EQ(ks_two_sample({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_EQ(ks_two_sample({1, 2}, {3, 4}), 1.0);
  EXPECT_DOUBLE_EQ(ks_two_sample({1, 2, 3, 4}, {2.5}), 0.5);
}

TEST(Lemma1, DiffRemainderIsZeroAndProductDecays) {
  ScenarioSpec s;
  s.kernel_id = "diff";
  s.reps = 50;
  s.master_seed = 21;
  const std::vector<std::size_t> ns = {100, 400};
  for (const auto& row : lemma1_diagnostic(s, ns)) EXPECT_EQ(row.median_m3, 0.0);
  s.kernel_id = "product";
  s.before = Distribution::normal(1, 1);
  const auto rows = lemma1_diagnostic(s, ns);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_LT(rows[1].median_m3, rows[0].median_m3);
  s.kernel_id = "abs_diff";
  EXPECT_EQ(code_of([&] { lemma1_diagnostic(s, ns); }), ErrorCode::MissingAnalyticProjection);
}

TEST(Median, EvenAndOdd) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
}

}  // namespace
}  // namespace ucpd
