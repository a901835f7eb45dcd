#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ucpd {

enum class Suite { Quick, Full };

std::optional<Suite> parse_suite(std::string_view name);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance criteria. Full uses the desk-scale replication counts
/// and tolerances; Quick cuts replications and widens Monte Carlo bands to the
/// matching binomial/normal 99.9% half-widths. When `progress` is set, one
/// line per criterion is written as it completes.
std::vector<CriterionResult> run_suite(Suite suite, unsigned workers, std::ostream* progress = nullptr);

std::string format_criterion(const CriterionResult& r);

}  // namespace ucpd
