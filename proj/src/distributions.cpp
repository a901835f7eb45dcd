#include "ucpd/distributions.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

#include "ucpd/errors.hpp"
#include "ucpd/format.hpp"
#include "ucpd/random.hpp"

namespace ucpd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> parse_params(std::string_view text, std::string_view whole) {
  std::vector<double> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view token = text.substr(0, comma);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
      throw Error(ErrorCode::BadParams, "bad distribution parameter in '" + std::string(whole) + "'");
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

Distribution Distribution::normal(double mean, double sd) {
  if (!(sd > 0.0) || !std::isfinite(mean) || !std::isfinite(sd))
    throw Error(ErrorCode::BadParams, "normal requires finite mean and sd > 0");
  return {DistributionFamily::Normal, mean, sd};
}

Distribution Distribution::uniform(double lo, double hi) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorCode::BadParams, "uniform requires finite lo < hi");
  return {DistributionFamily::Uniform, lo, hi};
}

Distribution Distribution::student_t(double df) {
  if (!(df > 0.0) || !std::isfinite(df)) throw Error(ErrorCode::BadParams, "student_t requires df > 0");
  return {DistributionFamily::StudentT, df, 0.0};
}

Distribution Distribution::pareto_symmetric(double index) {
  if (!(index > 0.0) || !std::isfinite(index))
    throw Error(ErrorCode::BadParams, "pareto_symmetric requires index > 0");
  return {DistributionFamily::ParetoSymmetric, index, 0.0};
}

Distribution Distribution::parse(std::string_view spec) {
  auto colon = spec.find(':');
  std::string_view name = spec.substr(0, colon);
  std::vector<double> p;
  if (colon != std::string_view::npos) p = parse_params(spec.substr(colon + 1), spec);
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (p.size() < lo || p.size() > hi)
      throw Error(ErrorCode::BadParams, "wrong parameter count in '" + std::string(spec) + "'");
  };
  if (name == "normal") {
    need(0, 2);
    return normal(p.size() > 0 ? p[0] : 0.0, p.size() > 1 ? p[1] : 1.0);
  }
  if (name == "uniform") {
    need(0, 2);
    if (p.size() == 1) throw Error(ErrorCode::BadParams, "uniform needs both bounds");
    return p.empty() ? uniform() : uniform(p[0], p[1]);
  }
  if (name == "student_t") {
    need(1, 1);
    return student_t(p[0]);
  }
  if (name == "pareto_symmetric") {
    need(1, 1);
    return pareto_symmetric(p[0]);
  }
  throw Error(ErrorCode::BadParams, "unknown distribution '" + std::string(spec) + "'");
}

double Distribution::quantile(double u) const {
  switch (family_) {
    case DistributionFamily::Normal:
      return a_ + b_ * normal_quantile(u);
    case DistributionFamily::Uniform:
      return a_ + (b_ - a_) * u;
    case DistributionFamily::StudentT:
      if (a_ == 2.0) return (2.0 * u - 1.0) / std::sqrt(2.0 * u * (1.0 - u));
      return boost::math::quantile(boost::math::students_t_distribution<double>(a_), u);
    case DistributionFamily::ParetoSymmetric:
      if (u < 0.5) return -std::pow(2.0 * u, -1.0 / a_);
      return std::pow(2.0 * (1.0 - u), -1.0 / a_);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double Distribution::cdf(double x) const {
  switch (family_) {
    case DistributionFamily::Normal:
      return normal_cdf((x - a_) / b_);
    case DistributionFamily::Uniform:
      if (x <= a_) return 0.0;
      if (x >= b_) return 1.0;
      return (x - a_) / (b_ - a_);
    case DistributionFamily::StudentT:
      return boost::math::cdf(boost::math::students_t_distribution<double>(a_), x);
    case DistributionFamily::ParetoSymmetric:
      if (x <= -1.0) return 0.5 * std::pow(-x, -a_);
      if (x < 1.0) return 0.5;
      return 1.0 - 0.5 * std::pow(x, -a_);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double Distribution::mean() const {
  switch (family_) {
    case DistributionFamily::Normal:
      return a_;
    case DistributionFamily::Uniform:
      return 0.5 * (a_ + b_);
    case DistributionFamily::StudentT:
    case DistributionFamily::ParetoSymmetric:
      return a_ > 1.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double Distribution::variance() const {
  switch (family_) {
    case DistributionFamily::Normal:
      return b_ * b_;
    case DistributionFamily::Uniform:
      return (b_ - a_) * (b_ - a_) / 12.0;
    case DistributionFamily::StudentT:
      return a_ > 2.0 ? a_ / (a_ - 2.0) : kInf;
    case DistributionFamily::ParetoSymmetric:
      return a_ > 2.0 ? a_ / (a_ - 2.0) : kInf;
  }
  return kInf;
}

double Distribution::tail_index() const {
  switch (family_) {
    case DistributionFamily::Normal:
    case DistributionFamily::Uniform:
      return kInf;
    case DistributionFamily::StudentT:
    case DistributionFamily::ParetoSymmetric:
      return a_;
  }
  return kInf;
}

std::string Distribution::spec() const {
  switch (family_) {
    case DistributionFamily::Normal:
      return "normal:" + format_real(a_) + "," + format_real(b_);
    case DistributionFamily::Uniform:
      return "uniform:" + format_real(a_) + "," + format_real(b_);
    case DistributionFamily::StudentT:
      return "student_t:" + format_real(a_);
    case DistributionFamily::ParetoSymmetric:
      return "pareto_symmetric:" + format_real(a_);
  }
  return "?";
}

}  // namespace ucpd
