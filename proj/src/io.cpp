#include "ucpd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "ucpd/errors.hpp"
#include "ucpd/format.hpp"

namespace ucpd {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Splits on '\n'; a trailing newline does not produce an extra line.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    lines.push_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

double parse_observation(std::string_view line, std::size_t line_no, DataFormat format, std::string_view field) {
  double value = 0.0;
  if (format == DataFormat::CsvSingleColumn) {
    try {
      value = parse_real(line);
    } catch (const ParseError&) {
      throw ParseError(line_no, std::string(line));
    }
  } else {
    auto doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_number()) {
      value = doc.get<double>();
    } else if (doc.is_object() && doc.contains(std::string(field)) && doc[std::string(field)].is_number()) {
      value = doc[std::string(field)].get<double>();
    } else {
      throw ParseError(line_no, std::string(line));
    }
  }
  if (!std::isfinite(value)) throw ParseError(line_no, std::string(line));
  return value;
}

std::uint64_t parse_u64(std::string_view text, std::size_t line_no) {
  text = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(line_no, std::string(text));
  return v;
}

}  // namespace

DataFormat parse_format(std::string_view name) {
  if (name == "csv") return DataFormat::CsvSingleColumn;
  if (name == "jsonl") return DataFormat::JsonlNumeric;
  throw Error(ErrorCode::BadParams, "unknown data format '" + std::string(name) + "'");
}

Sample ingest_text(std::string_view text, DataFormat format, std::string_view field) {
  std::vector<double> values;
  std::size_t line_no = 0;
  for (std::string_view raw : split_lines(text)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    values.push_back(parse_observation(line, line_no, format, field));
  }
  if (values.size() < kMinIngestSize)
    throw Error(ErrorCode::TooFewObservations,
                std::to_string(values.size()) + " observations, need at least " + std::to_string(kMinIngestSize));
  return Sample(std::move(values));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Sample ingest(const std::filesystem::path& path, DataFormat format, std::string_view field) {
  return ingest_text(read_file(path), format, field);
}

std::string to_csv(const Sample& sample) {
  std::string out;
  for (double v : sample.values()) {
    out += format_real(v);
    out += '\n';
  }
  return out;
}

LimitProcess parse_process(std::string_view name) {
  if (name == "gamma") return LimitProcess::GammaProcess;
  if (name == "bridge") return LimitProcess::Bridge;
  throw Error(ErrorCode::BadParams, "unknown process '" + std::string(name) + "'");
}

std::string serialize_law(const LimitLaw& law, bool include_sups) {
  std::string out = "# ucpd limit-law cache\n";
  auto kv = [&](std::string_view key, const std::string& value) {
    out.append(key).append("=").append(value).append("\n");
  };
  kv("format_version", std::to_string(kCacheFormatVersion));
  kv("process", std::string(to_string(law.process)));
  kv("weight", law.weight);
  kv("grid_size", std::to_string(law.grid_size));
  kv("reps", std::to_string(law.reps));
  kv("master_seed", std::to_string(law.master_seed));
  kv("low_reps_warning", law.low_reps_warning ? "1" : "0");
  kv("sups_included", include_sups ? "1" : "0");
  for (std::size_t i = 0; i < kQuantileLevels.size(); ++i)
    kv("quantile_" + format_real(kQuantileLevels[i]), format_real(law.quantiles[i]));
  if (include_sups) {
    out += "data\n";
    for (double v : law.sorted_sups) out.append(format_real(v)).append("\n");
  }
  out += "end\n";
  return out;
}

LimitLaw parse_law(std::string_view text) {
  LimitLaw law;
  std::map<std::string, std::pair<std::string, std::size_t>, std::less<>> fields;
  auto lines = split_lines(text);
  std::size_t i = 0;
  bool saw_end = false;
  bool saw_data = false;
  for (; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    if (line == "data") {
      saw_data = true;
      ++i;
      break;
    }
    if (line == "end") {
      saw_end = true;
      break;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(i + 1, std::string(line));
    fields[std::string(line.substr(0, eq))] = {std::string(line.substr(eq + 1)), i + 1};
  }
  auto get = [&](std::string_view key) -> const std::pair<std::string, std::size_t>& {
    auto it = fields.find(key);
    if (it == fields.end()) throw ParseError(0, "missing field " + std::string(key));
    return it->second;
  };
  auto version = parse_u64(get("format_version").first, get("format_version").second);
  if (version != static_cast<std::uint64_t>(kCacheFormatVersion))
    throw ParseError(get("format_version").second, "unsupported format_version " + std::to_string(version));
  try {
    law.process = parse_process(get("process").first);
  } catch (const Error&) {
    throw ParseError(get("process").second, get("process").first);
  }
  law.weight = get("weight").first;
  law.grid_size = parse_u64(get("grid_size").first, get("grid_size").second);
  law.reps = parse_u64(get("reps").first, get("reps").second);
  law.master_seed = parse_u64(get("master_seed").first, get("master_seed").second);
  law.low_reps_warning = parse_u64(get("low_reps_warning").first, get("low_reps_warning").second) != 0;
  const bool sups = parse_u64(get("sups_included").first, get("sups_included").second) != 0;
  for (std::size_t q = 0; q < kQuantileLevels.size(); ++q) {
    const auto& [value, line_no] = get("quantile_" + format_real(kQuantileLevels[q]));
    try {
      law.quantiles[q] = parse_real(value);
    } catch (const ParseError&) {
      throw ParseError(line_no, value);
    }
  }
  if (sups != saw_data) throw ParseError(i, "sups_included disagrees with the data block");
  if (saw_data) {
    law.sorted_sups.reserve(law.reps);
    for (; i < lines.size(); ++i) {
      std::string_view line = trim(lines[i]);
      if (line.empty()) continue;
      if (line == "end") {
        saw_end = true;
        break;
      }
      try {
        law.sorted_sups.push_back(parse_real(line));
      } catch (const ParseError&) {
        throw ParseError(i + 1, std::string(line));
      }
    }
    if (law.sorted_sups.size() != law.reps) throw ParseError(i + 1, "data block length differs from reps");
    for (std::size_t k = 1; k < law.sorted_sups.size(); ++k)
      if (law.sorted_sups[k] < law.sorted_sups[k - 1]) throw ParseError(0, "data block is not sorted");
  }
  if (!saw_end) throw ParseError(lines.size(), "missing end marker");
  return law;
}

void save_law(const std::filesystem::path& path, const LimitLaw& law, bool include_sups) {
  write_file(path, serialize_law(law, include_sups));
}

LimitLaw load_law(const std::filesystem::path& path) { return parse_law(read_file(path)); }

std::string format_result(const TestResult& r) {
  std::ostringstream out;
  out << "format_version=1\n"
      << "record=detect\n"
      << "statistic=" << format_real(r.statistic) << "\n"
      << "p_value=" << format_real(r.p_value) << "\n"
      << "critical_value=" << format_real(r.critical_value) << "\n"
      << "alpha=" << format_real(r.alpha) << "\n"
      << "reject=" << (r.reject ? "true" : "false") << "\n"
      << "k_hat=" << r.k_hat << "\n"
      << "t_hat=" << format_real(r.t_hat) << "\n"
      << "n=" << r.n << "\n"
      << "kernel=" << r.kernel_id << "\n"
      << "weight=" << r.weight << "\n"
      << "law_process=" << to_string(r.process) << "\n"
      << "law_seed=" << r.law_seed << "\n"
      << "law_grid=" << r.law_grid << "\n"
      << "law_reps=" << r.law_reps << "\n";
  return out.str();
}

std::string format_experiment(const ExperimentReport& rep, const ScenarioSpec& spec) {
  std::ostringstream out;
  out << "format_version=1\n"
      << "record=experiment\n"
      << "n=" << spec.n << "\n"
      << "before=" << spec.before.spec() << "\n";
  if (spec.has_change())
    out << "after=" << spec.after->spec() << "\n"
        << "change_fraction=" << format_real(*spec.change_fraction) << "\n";
  out << "kernel=" << spec.kernel_id << "\n"
      << "weight=" << spec.weight << "\n"
      << "seed=" << spec.master_seed << "\n"
      << "reps=" << rep.reps << "\n"
      << "alpha=" << format_real(rep.alpha) << "\n"
      << "reject_rate=" << format_real(rep.reject_rate) << "\n"
      << "ks_distance=" << format_real(rep.ks_distance_of_statistic_to_law) << "\n";
  if (rep.mean_abs_error_of_t_hat)
    out << "mean_abs_error_t_hat=" << format_real(*rep.mean_abs_error_of_t_hat) << "\n"
        << "median_abs_error_t_hat=" << format_real(*rep.median_abs_error_of_t_hat) << "\n";
  out << "moment_condition_certified=" << (rep.moment_condition_certified ? "true" : "false") << "\n";
  return out.str();
}

std::string format_classification(const WeightClassification& cls) {
  std::string out;
  auto number = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return format_real(v);
  };
  for (const auto& v : cls.verdicts) {
    nlohmann::json line = {{"weight", cls.weight},
                           {"c", v.c},
                           {"verdict", std::string(to_string(v.verdict))},
                           {"tail_estimate", number(v.tail_estimate)},
                           {"partial_integral", number(v.partial_integral)},
                           {"decay_exponent", number(v.decay_exponent)}};
    out += line.dump() + "\n";
  }
  nlohmann::json summary = {{"weight", cls.weight}, {"summary", std::string(to_string(cls.summary))}};
  if (cls.c_threshold) summary["c_threshold"] = *cls.c_threshold;
  out += summary.dump() + "\n";
  return out;
}

std::string format_path_csv(const ProcessPath& path, const WeightFunction& q) {
  std::string out = "t,u,q\n";
  for (std::size_t k = 0; k < path.t.size(); ++k) {
    out += format_real(path.t[k]) + "," + format_real(path.u[k]) + "," + format_real(q(path.t[k])) + "\n";
  }
  return out;
}

CalibrationConfig parse_calibration(std::string_view json_text) {
  auto doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw Error(ErrorCode::BadParams, "scenario is not a JSON object");
  CalibrationConfig cfg;
  try {
    auto& s = cfg.scenario;
    s.before = Distribution::parse(doc.at("before").get<std::string>());
    if (doc.contains("after")) s.after = Distribution::parse(doc["after"].get<std::string>());
    if (doc.contains("change_fraction")) s.change_fraction = doc["change_fraction"].get<double>();
    s.n = doc.value("n", s.n);
    s.kernel_id = doc.value("kernel", s.kernel_id);
    s.weight = doc.value("weight", s.weight);
    s.reps = doc.value("reps", s.reps);
    s.master_seed = doc.value("seed", s.master_seed);
    cfg.alpha = doc.value("alpha", cfg.alpha);
    if (doc.contains("law")) {
      const auto& law = doc["law"];
      cfg.law_grid = law.value("grid", cfg.law_grid);
      cfg.law_reps = law.value("reps", cfg.law_reps);
      cfg.law_seed = law.value("seed", cfg.law_seed);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadParams, std::string("scenario: ") + e.what());
  }
  cfg.scenario.validate();
  builtin_kernel(cfg.scenario.kernel_id);
  parse_weight(cfg.scenario.weight);
  return cfg;
}

}  // namespace ucpd
