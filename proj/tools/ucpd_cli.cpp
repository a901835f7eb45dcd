// ucpd: changepoint tests built on studentized U-statistic processes.
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ucpd/detector.hpp"
#include "ucpd/errors.hpp"
#include "ucpd/format.hpp"
#include "ucpd/io.hpp"
#include "ucpd/limitsim.hpp"
#include "ucpd/verify.hpp"
#include "ucpd/weights.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitMismatch = 3;

struct DetectOptions {
  std::string data;
  std::string format = "csv";
  std::string field = "x";
  std::string kernel = "sign_diff";
  std::string weight = "one";
  double alpha = 0.05;
  std::string cache;
  std::size_t grid = 2048;
  std::size_t reps = 100000;
  std::uint64_t seed = 42;
  std::string dump_path;
  std::string out;
};

struct SimulateOptions {
  std::string process = "bridge";
  std::string weight = "one";
  std::size_t grid = 2048;
  std::size_t reps = 100000;
  std::uint64_t seed = 42;
  std::string out;
  bool no_sups = false;
};

void emit(const std::string& record, const std::string& out_path) {
  std::cout << record << std::flush;
  if (!out_path.empty()) ucpd::write_file(out_path, record);
}

int cmd_detect(const DetectOptions& o) {
  using namespace ucpd;
  const Sample sample = ingest(o.data, parse_format(o.format), o.field);
  const Kernel kernel = builtin_kernel(o.kernel);
  const WeightFunction q = parse_weight(o.weight);
  const LimitLaw law = o.cache.empty()
                           ? build_limit_law(limit_for(kernel.symmetry()), q, o.grid, o.reps, o.seed)
                           : load_law(o.cache);
  ProcessPath path;
  const TestResult result = run_test(sample, kernel, q, o.alpha, law, &path);
  if (!o.dump_path.empty()) write_file(o.dump_path, format_path_csv(path, q));
  emit(format_result(result), o.out);
  return kExitOk;
}

int cmd_simulate(const SimulateOptions& o) {
  using namespace ucpd;
  const LimitLaw law = build_limit_law(parse_process(o.process), parse_weight(o.weight), o.grid, o.reps, o.seed);
  save_law(o.out, law, !o.no_sups);
  std::cout << "format_version=1\nrecord=simulate\nout=" << o.out << "\nreps=" << law.reps
            << "\nlow_reps_warning=" << (law.low_reps_warning ? "true" : "false") << "\n";
  for (std::size_t i = 0; i < kQuantileLevels.size(); ++i)
    std::cout << "quantile_" << format_real(kQuantileLevels[i]) << "=" << format_real(law.quantiles[i]) << "\n";
  if (law.low_reps_warning)
    std::cerr << "warning: " << law.reps << " reps is below " << kMinQuantileReps
              << "; quantiles are unreliable\n";
  return kExitOk;
}

int cmd_check_weight(const std::string& spec, const std::string& c_list) {
  using namespace ucpd;
  std::vector<double> grid;
  if (c_list.empty()) {
    grid = default_c_grid();
  } else {
    std::stringstream ss(c_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        grid.push_back(parse_real(item));
      } catch (const ParseError&) {
        throw Error(ErrorCode::BadParams, "bad c value '" + item + "'");
      }
    }
  }
  std::cout << format_classification(classify(parse_weight(spec), grid));
  return kExitOk;
}

int cmd_calibrate(const std::string& scenario_path) {
  using namespace ucpd;
  const CalibrationConfig cfg = parse_calibration(read_file(scenario_path));
  const Kernel kernel = builtin_kernel(cfg.scenario.kernel_id);
  const LimitLaw law = build_limit_law(limit_for(kernel.symmetry()), parse_weight(cfg.scenario.weight), cfg.law_grid,
                                       cfg.law_reps, cfg.law_seed);
  const ExperimentReport rep = size_power_experiment(cfg.scenario, cfg.alpha, law);
  std::cout << format_experiment(rep, cfg.scenario);
  return kExitOk;
}

int cmd_verify(const std::string& suite_name) {
  auto suite = ucpd::parse_suite(suite_name);
  if (!suite) {
    std::cerr << "error: unknown suite '" << suite_name << "' (expected quick or full)\n";
    return kExitInput;
  }
  const auto results = ucpd::run_suite(*suite, ucpd::default_workers(), &std::cout);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed ? 1 : 0;
  std::cout << passed << "/" << results.size() << " criteria passed\n";
  return passed == results.size() ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Changepoint tests from studentized U-statistic processes"};
  app.require_subcommand(1);

  DetectOptions det;
  auto* detect = app.add_subcommand("detect", "Test a data file for a single change in distribution");
  detect->add_option("--data", det.data, "Data file (observations in time order)")->required();
  detect->add_option("--format", det.format, "csv or jsonl")->capture_default_str();
  detect->add_option("--field", det.field, "JSONL field holding the observation")->capture_default_str();
  detect->add_option("--kernel", det.kernel, "Kernel id")->capture_default_str();
  detect->add_option("--weight", det.weight, "Weight spec: one, pow:<nu>, loglog:<lambda>")->capture_default_str();
  detect->add_option("--alpha", det.alpha, "Significance level in (0, 0.5]")->capture_default_str();
  auto* cache_opt = detect->add_option("--cache", det.cache, "Limit-law cache file");
  auto* grid_opt = detect->add_option("--grid", det.grid, "Simulation grid size")->capture_default_str();
  auto* reps_opt = detect->add_option("--reps", det.reps, "Simulation replications")->capture_default_str();
  auto* seed_opt = detect->add_option("--seed", det.seed, "Simulation master seed")->capture_default_str();
  cache_opt->excludes(grid_opt)->excludes(reps_opt)->excludes(seed_opt);
  detect->add_option("--dump-path", det.dump_path, "Write t,u,q path CSV here");
  detect->add_option("--out", det.out, "Also write the result record here");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Build and cache a limit law");
  simulate->add_option("--process", sim.process, "gamma or bridge")->capture_default_str();
  simulate->add_option("--weight", sim.weight, "Weight spec")->capture_default_str();
  simulate->add_option("--grid", sim.grid, "Grid size (power of two)")->capture_default_str();
  simulate->add_option("--reps", sim.reps, "Replications")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--out", sim.out, "Cache file")->required();
  simulate->add_flag("--no-sups", sim.no_sups, "Store only the quantile table");

  std::string weight_spec;
  std::string c_list;
  auto* check = app.add_subcommand("check-weight", "Classify finiteness of I(q, c)");
  check->add_option("weight", weight_spec, "Weight spec")->required();
  check->add_option("--c", c_list, "Comma-separated ascending c values");

  std::string scenario;
  auto* calibrate = app.add_subcommand("calibrate", "Run a size/power experiment from a JSON scenario");
  calibrate->add_option("--scenario", scenario, "Scenario JSON file")->required();

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("suite", suite, "quick or full")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*detect) return cmd_detect(det);
    if (*simulate) return cmd_simulate(sim);
    if (*check) return cmd_check_weight(weight_spec, c_list);
    if (*calibrate) return cmd_calibrate(scenario);
    if (*verify) return cmd_verify(suite);
  } catch (const ucpd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ucpd::ErrorCode::LawMismatch ? kExitMismatch : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
