#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "ucpd/detector.hpp"
#include "ucpd/limitsim.hpp"
#include "ucpd/uprocess.hpp"
#include "ucpd/weights.hpp"

namespace ucpd {

enum class DataFormat { CsvSingleColumn, JsonlNumeric };

/// "csv" or "jsonl". Throws BadParams.
DataFormat parse_format(std::string_view name);

/// Minimum number of observations accepted from a data file.
inline constexpr std::size_t kMinIngestSize = 4;

/// Reads observations in file order. Blank lines are skipped; any other line
/// that does not parse to a finite real throws ParseError with its 1-based
/// line number. JSONL lines are either a bare number or an object holding
/// `field`. Throws TooFewObservations below kMinIngestSize, IoError if the
/// file cannot be opened.
Sample ingest(const std::filesystem::path& path, DataFormat format, std::string_view field = "x");
Sample ingest_text(std::string_view text, DataFormat format, std::string_view field = "x");

/// One observation per line in shortest round-trip form.
std::string to_csv(const Sample& sample);

// Limit-law cache. Layout:
//
//   # ucpd limit-law cache
//   format_version=1
//   process=bridge|gamma
//   weight=<spec>
//   grid_size=<G>
//   reps=<M>
//   master_seed=<S>
//   low_reps_warning=0|1
//   sups_included=0|1
//   quantile_<level>=<value>        (one line per level)
//   data                            (only when sups_included=1)
//   <sorted sup>                    (reps lines)
//   end
//
// Reals use the shortest representation that round-trips, so parsing a
// serialized law and serializing again reproduces the same bytes.
inline constexpr int kCacheFormatVersion = 1;

std::string serialize_law(const LimitLaw& law, bool include_sups = true);
/// Throws ParseError (line number within the text) on malformed input.
LimitLaw parse_law(std::string_view text);
void save_law(const std::filesystem::path& path, const LimitLaw& law, bool include_sups = true);
LimitLaw load_law(const std::filesystem::path& path);

LimitProcess parse_process(std::string_view name);

/// Line-oriented key=value records, each starting with format_version.
std::string format_result(const TestResult& result);
std::string format_experiment(const ExperimentReport& report, const ScenarioSpec& spec);
/// JSON lines: one object per tested c, then a summary object.
std::string format_classification(const WeightClassification& classification);
/// CSV with header t,u,q for plotting.
std::string format_path_csv(const ProcessPath& path, const WeightFunction& q);

/// Scenario file for `calibrate` (JSON):
///   {"n": 500, "before": "normal:0,1", "after": "normal:1,1", "change_fraction": 0.5,
///    "kernel": "sign_diff", "weight": "one", "reps": 2000, "seed": 1, "alpha": 0.05,
///    "law": {"grid": 2048, "reps": 100000, "seed": 42}}
/// Everything but "before" is optional.
struct CalibrationConfig {
  ScenarioSpec scenario;
  double alpha = 0.05;
  std::size_t law_grid = 2048;
  std::size_t law_reps = 100000;
  std::uint64_t law_seed = 42;
};

CalibrationConfig parse_calibration(std::string_view json_text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace ucpd
