#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ucpd/distributions.hpp"
#include "ucpd/kernels.hpp"
#include "ucpd/limitsim.hpp"
#include "ucpd/parallel.hpp"
#include "ucpd/uprocess.hpp"
#include "ucpd/weights.hpp"

namespace ucpd {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double critical_value = 0.0;
  double alpha = 0.05;
  bool reject = false;
  std::size_t k_hat = 1;
  double t_hat = 0.0;
  std::size_t n = 0;
  std::string kernel_id;
  std::string weight;
  LimitProcess process = LimitProcess::Bridge;
  std::uint64_t law_seed = 0;
  std::size_t law_grid = 0;
  std::size_t law_reps = 0;
};

/// Index (1-based) of the first maximum of values.
std::size_t first_argmax(std::span<const double> values);

/// sup_k |u_k| / q(t_k) over the jump grid of the studentized path, compared
/// against `law`. Throws LawMismatch if the law's process does not match the
/// kernel's symmetry or its weight differs from q; BadParams for alpha
/// outside (0, 0.5].
TestResult run_test(const Sample& sample, const Kernel& kernel, const WeightFunction& q, double alpha,
                    const LimitLaw& law);

/// Same, also returning the studentized path.
TestResult run_test(const Sample& sample, const Kernel& kernel, const WeightFunction& q, double alpha,
                    const LimitLaw& law, ProcessPath* path_out);

std::pair<std::size_t, double> estimate_changepoint(const TestResult& result);

/// Simulation scenario: n observations, the first floor(tau n) from `before`
/// and the rest from `after` (no change when change_fraction is unset).
struct ScenarioSpec {
  std::size_t n = 500;
  Distribution before = Distribution::normal();
  std::optional<Distribution> after;
  std::optional<double> change_fraction;
  std::string kernel_id = "sign_diff";
  std::string weight = "one";
  std::size_t reps = 2000;
  std::uint64_t master_seed = 1;

  bool has_change() const { return change_fraction.has_value(); }
  /// Number of pre-change observations (n when there is no change).
  std::size_t change_index() const;
  /// Throws BadParams when the invariants fail.
  void validate() const;
};

/// Rep r of the scenario. Segment draws come from CounterStream(master_seed, r)
/// with the SegmentBefore / SegmentAfter tags.
Sample generate_sample(const ScenarioSpec& spec, std::uint64_t rep);

/// Whether E|h(X1, X2)|^{5/3} < inf is certified for the scenario from the
/// kernel's growth degree and the distributions' tail indices.
bool moment_condition_certified(const ScenarioSpec& spec, const Kernel& kernel);

struct ExperimentReport {
  std::size_t reps = 0;
  double alpha = 0.05;
  bool change = false;
  double reject_rate = 0.0;
  /// Alternatives only.
  std::optional<double> mean_abs_error_of_t_hat;
  std::optional<double> median_abs_error_of_t_hat;
  /// Two-sample KS distance between the statistics and law.sorted_sups.
  double ks_distance_of_statistic_to_law = 0.0;
  bool moment_condition_certified = true;
  std::vector<double> statistics;
  std::vector<double> t_hats;
};

ExperimentReport size_power_experiment(const ScenarioSpec& spec, double alpha, const LimitLaw& law,
                                       unsigned workers = default_workers());

/// Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

struct Lemma1Row {
  std::size_t n = 0;
  double median_m3 = 0.0;
};

/// Median over spec.reps of M3(n) = n^{-3/2} max_k |sum_{i<=k<j} psi(X_i, X_j)|
/// for each n. Uses spec.before as the (no-change) distribution. Throws
/// MissingAnalyticProjection if the kernel has no projection there.
std::vector<Lemma1Row> lemma1_diagnostic(const ScenarioSpec& spec, std::span<const std::size_t> n_list,
                                         unsigned workers = default_workers());

double median(std::vector<double> values);

}  // namespace ucpd
