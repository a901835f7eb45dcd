#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ucpd {

/// Positive weight q on (0, 1), nondecreasing near 0 and nonincreasing near 1.
///
/// The evaluator receives both t and 1 - t so that points within 2^-53 of the
/// right endpoint can be represented exactly by their complement.
class WeightFunction {
 public:
  using Evaluator = std::function<double(double t, double one_minus_t)>;

  WeightFunction(std::string spec, Evaluator eval, double monotone_zone = 0.1);

  /// Canonical spec string ("one", "pow:0.25", "loglog:1").
  const std::string& spec() const noexcept { return spec_; }
  double monotone_zone() const noexcept { return monotone_zone_; }

  double operator()(double t) const { return eval_(t, 1.0 - t); }
  double at(double t, double one_minus_t) const { return eval_(t, one_minus_t); }

 private:
  std::string spec_;
  Evaluator eval_;
  double monotone_zone_;
};

WeightFunction constant_one();
/// q(t) = (t(1-t))^nu. Throws BadParams for nu <= 0.
WeightFunction power_weight(double nu);
/// q(t) = sqrt(lambda t(1-t) log log(e^e / (t(1-t)))). Throws BadParams for lambda <= 0.
WeightFunction loglog_weight(double lambda);

/// id in {constant_one, power, loglog}; power and loglog take one parameter.
WeightFunction builtin_weight(std::string_view id, std::span<const double> params = {});

/// Parses "one", "pow:<nu>", "loglog:<lambda>". Throws BadParams.
WeightFunction parse_weight(std::string_view spec);

enum class Verdict { Finite, Divergent, Inconclusive };
enum class ClassSummary { FiniteForAllTested, FiniteForSomeNotAll, DivergentForAllTested, Inconclusive };

std::string_view to_string(Verdict v);
std::string_view to_string(ClassSummary s);

struct CVerdict {
  double c = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  /// Partial integral over the deepest window plus the extrapolated tail
  /// (inf for Divergent, NaN for Inconclusive).
  double tail_estimate = 0.0;
  /// Integral over [2^-m_max, 1 - 2^-m_max].
  double partial_integral = 0.0;
  /// Power-law decay exponent p of the dyadic shell increments, a_m ~ m^-p,
  /// at the slower endpoint. +inf when the increments underflow to zero.
  double decay_exponent = 0.0;
};

struct WeightClassification {
  std::string weight;
  std::vector<CVerdict> verdicts;
  ClassSummary summary = ClassSummary::Inconclusive;
  /// For FiniteForSomeNotAll: bisection estimate of inf{c : I(q, c) < inf}.
  std::optional<double> c_threshold;
};

struct ClassifyOptions {
  int m_max = 1000;
  double abs_tol = 1e-10;
  double overflow_cap = 1e12;
  /// Finite iff p > 1 + margin, Divergent iff p < 1 - margin.
  double exponent_margin = 0.02;
  int bisection_steps = 40;
};

const std::vector<double>& default_c_grid();

/// Numerical finiteness test for
///   I(q, c) = int_0^1 (t(1-t))^-1 exp(-c q(t)^2 / (t(1-t))) dt.
/// Throws BadParams if c_grid is empty, unsorted or contains c <= 0.
WeightClassification classify(const WeightFunction& q, std::span<const double> c_grid,
                              const ClassifyOptions& options = {});

/// Verdict for a single c.
CVerdict classify_one(const WeightFunction& q, double c, const ClassifyOptions& options = {});

struct Lemma3Report {
  bool limit_zero_at_0 = false;
  bool limit_zero_at_1 = false;
};

/// Checks t^{1/2}/q(t) -> 0 as t -> 0 (and the mirrored ratio at 1) on t = 2^-m,
/// m = 4 ... m_max.
Lemma3Report lemma3_check(const WeightFunction& q, int m_max = 1000);

}  // namespace ucpd
