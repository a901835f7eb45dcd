#pragma once

#include <string>
#include <string_view>

namespace ucpd {

enum class DistributionFamily { Normal, Uniform, StudentT, ParetoSymmetric };

/// Scenario distributions for simulation experiments. Draws use the inverse
/// CDF so that one uniform maps to one observation.
///
///   normal(mean, sd)
///   uniform(lo, hi)
///   student_t(df)
///   pareto_symmetric(index): |X| >= 1 with P(|X| > x) = x^-index, random sign
class Distribution {
 public:
  static Distribution normal(double mean = 0.0, double sd = 1.0);
  static Distribution uniform(double lo = 0.0, double hi = 1.0);
  static Distribution student_t(double df);
  static Distribution pareto_symmetric(double index);

  /// Parses "normal", "normal:0,1", "uniform:0,1", "student_t:2", "pareto_symmetric:1.5".
  static Distribution parse(std::string_view spec);

  DistributionFamily family() const noexcept { return family_; }
  double param1() const noexcept { return a_; }
  double param2() const noexcept { return b_; }

  double quantile(double u) const;
  double cdf(double x) const;
  /// Both may be +inf (or NaN for an undefined mean).
  double mean() const;
  double variance() const;
  /// Largest p with E|X|^p finite; +inf for light tails.
  double tail_index() const;
  bool continuous() const noexcept { return true; }

  std::string spec() const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  Distribution(DistributionFamily family, double a, double b) : family_(family), a_(a), b_(b) {}

  DistributionFamily family_;
  double a_;
  double b_;
};

}  // namespace ucpd
