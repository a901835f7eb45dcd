#include "ucpd/detector.hpp"

#include <algorithm>
#include <cmath>

#include "ucpd/errors.hpp"

namespace ucpd {

std::size_t first_argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best + 1;
}

TestResult run_test(const Sample& sample, const Kernel& kernel, const WeightFunction& q, double alpha,
                    const LimitLaw& law) {
  return run_test(sample, kernel, q, alpha, law, nullptr);
}

TestResult run_test(const Sample& sample, const Kernel& kernel, const WeightFunction& q, double alpha,
                    const LimitLaw& law, ProcessPath* path_out) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw Error(ErrorCode::BadParams, "alpha must lie in (0, 0.5]");
  const LimitProcess expected = limit_for(kernel.symmetry());
  if (law.process != expected)
    throw Error(ErrorCode::LawMismatch, "kernel " + kernel.id() + " is " + std::string(to_string(kernel.symmetry())) +
                                            " and needs a " + std::string(to_string(expected)) + " law, got " +
                                            std::string(to_string(law.process)));
  if (law.weight != q.spec())
    throw Error(ErrorCode::LawMismatch, "law weight " + law.weight + " differs from " + q.spec());
  if (law.sorted_sups.empty()) throw Error(ErrorCode::LawMismatch, "law carries no simulated sups");

  ProcessPath path = studentized_path(sample, kernel);
  const std::size_t n = sample.size();
  const double np1 = static_cast<double>(n + 1);
  std::vector<double> weighted(path.u.size());
  for (std::size_t k = 1; k < n; ++k) {
    const double kd = static_cast<double>(k);
    weighted[k - 1] = std::fabs(path.u[k - 1]) / q.at(kd / np1, (np1 - kd) / np1);
  }
  TestResult r;
  r.k_hat = first_argmax(weighted);
  r.t_hat = static_cast<double>(r.k_hat) / np1;
  r.statistic = weighted[r.k_hat - 1];
  r.alpha = alpha;
  r.critical_value = law.quantile(1.0 - alpha);
  r.p_value = p_value(law, r.statistic);
  r.reject = r.statistic > r.critical_value;
  r.n = n;
  r.kernel_id = kernel.id();
  r.weight = q.spec();
  r.process = law.process;
  r.law_seed = law.master_seed;
  r.law_grid = law.grid_size;
  r.law_reps = law.reps;
  if (path_out != nullptr) *path_out = std::move(path);
  return r;
}

std::pair<std::size_t, double> estimate_changepoint(const TestResult& result) {
  return {result.k_hat, result.t_hat};
}

std::size_t ScenarioSpec::change_index() const {
  if (!change_fraction) return n;
  return static_cast<std::size_t>(std::floor(*change_fraction * static_cast<double>(n)));
}

void ScenarioSpec::validate() const {
  if (n < Sample::kMinSize) throw Error(ErrorCode::BadParams, "scenario n too small");
  if (reps == 0) throw Error(ErrorCode::BadParams, "scenario reps must be positive");
  builtin_kernel(kernel_id);
  parse_weight(weight);
  if (change_fraction) {
    const double tau = *change_fraction;
    if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorCode::BadParams, "change fraction must lie in (0, 1)");
    if (!after) throw Error(ErrorCode::BadParams, "change scenario needs an 'after' distribution");
    const double nd = static_cast<double>(n);
    if (tau * nd < 2.0 || (1.0 - tau) * nd < 2.0)
      throw Error(ErrorCode::BadParams, "each segment needs at least two observations");
  }
}

Sample generate_sample(const ScenarioSpec& spec, std::uint64_t rep) {
  const std::size_t k = spec.change_index();
  std::vector<double> x(spec.n);
  CounterStream before(spec.master_seed, rep, StreamTag::SegmentBefore);
  for (std::size_t i = 0; i < k; ++i) x[i] = spec.before.quantile(before.uniform());
  if (k < spec.n) {
    const Distribution& d = spec.after ? *spec.after : spec.before;
    CounterStream after(spec.master_seed, rep, StreamTag::SegmentAfter);
    for (std::size_t i = k; i < spec.n; ++i) x[i] = d.quantile(after.uniform());
  }
  return Sample(std::move(x));
}

bool moment_condition_certified(const ScenarioSpec& spec, const Kernel& kernel) {
  auto degree = kernel.growth_degree();
  if (!degree) return false;
  if (*degree == 0) return true;
  const double needed = 5.0 / 3.0 * *degree;
  if (!(spec.before.tail_index() > needed)) return false;
  if (spec.after && !(spec.after->tail_index() > needed)) return false;
  return true;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::BadParams, "KS distance of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::BadParams, "median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

ExperimentReport size_power_experiment(const ScenarioSpec& spec, double alpha, const LimitLaw& law,
                                       unsigned workers) {
  spec.validate();
  if (spec.reps < 200) throw Error(ErrorCode::BadParams, "experiments need at least 200 reps");
  const Kernel kernel = builtin_kernel(spec.kernel_id);
  const WeightFunction q = parse_weight(spec.weight);

  ExperimentReport report;
  report.reps = spec.reps;
  report.alpha = alpha;
  report.change = spec.has_change();
  report.moment_condition_certified = moment_condition_certified(spec, kernel);
  report.statistics.assign(spec.reps, 0.0);
  report.t_hats.assign(spec.reps, 0.0);
  std::vector<char> rejected(spec.reps, 0);
  parallel_for(spec.reps, workers, [&](std::size_t r) {
    TestResult res = run_test(generate_sample(spec, r), kernel, q, alpha, law);
    report.statistics[r] = res.statistic;
    report.t_hats[r] = res.t_hat;
    rejected[r] = res.reject ? 1 : 0;
  });
  std::size_t count = 0;
  for (char c : rejected) count += static_cast<std::size_t>(c);
  report.reject_rate = static_cast<double>(count) / static_cast<double>(spec.reps);
  report.ks_distance_of_statistic_to_law = ks_two_sample(report.statistics, law.sorted_sups);
  if (spec.has_change()) {
    std::vector<double> err(spec.reps);
    double sum = 0.0;
    for (std::size_t r = 0; r < spec.reps; ++r) {
      err[r] = std::fabs(report.t_hats[r] - *spec.change_fraction);
      sum += err[r];
    }
    report.mean_abs_error_of_t_hat = sum / static_cast<double>(spec.reps);
    report.median_abs_error_of_t_hat = median(std::move(err));
  }
  return report;
}

std::vector<Lemma1Row> lemma1_diagnostic(const ScenarioSpec& spec, std::span<const std::size_t> n_list,
                                         unsigned workers) {
  const Kernel kernel = builtin_kernel(spec.kernel_id);
  auto projection = kernel.projection(spec.before);
  if (!projection)
    throw Error(ErrorCode::MissingAnalyticProjection, kernel.id() + " under " + spec.before.spec());
  std::vector<Lemma1Row> rows;
  for (std::size_t n : n_list) {
    ScenarioSpec s = spec;
    s.n = n;
    s.change_fraction.reset();
    s.after.reset();
    s.validate();
    std::vector<double> m3(s.reps);
    parallel_for(s.reps, workers, [&](std::size_t r) { m3[r] = remainder_max(generate_sample(s, r), kernel, *projection); });
    rows.push_back({n, median(std::move(m3))});
  }
  return rows;
}

}  // namespace ucpd
