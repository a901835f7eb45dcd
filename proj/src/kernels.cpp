#include "ucpd/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "ucpd/errors.hpp"
#include "ucpd/random.hpp"

namespace ucpd {

std::string_view to_string(Symmetry s) {
  return s == Symmetry::Symmetric ? "symmetric" : "antisymmetric";
}

Kernel::Kernel(std::string id, Function fn, Symmetry symmetry, Projector projector,
               std::optional<int> growth_degree)
    : id_(std::move(id)),
      fn_(std::move(fn)),
      symmetry_(symmetry),
      projector_(std::move(projector)),
      growth_degree_(growth_degree) {}

std::optional<AnalyticProjection> Kernel::projection(const Distribution& scenario) const {
  if (!projector_) return std::nullopt;
  return projector_(scenario);
}

namespace {

bool finite_moments(const Distribution& d) {
  return std::isfinite(d.mean()) && std::isfinite(d.variance());
}

std::optional<AnalyticProjection> product_projection(const Distribution& d) {
  if (!finite_moments(d)) return std::nullopt;
  const double mu = d.mean();
  return AnalyticProjection{d, mu * mu, [mu](double t) { return mu * t - mu * mu; },
                            mu * mu * d.variance()};
}

std::optional<AnalyticProjection> half_sq_diff_projection(const Distribution& d) {
  // Needs the fourth central moment, known here for normal and uniform only.
  double central4 = 0.0;
  if (d.family() == DistributionFamily::Normal) {
    central4 = 3.0 * std::pow(d.param2(), 4);
  } else if (d.family() == DistributionFamily::Uniform) {
    central4 = std::pow(d.param2() - d.param1(), 4) / 80.0;
  } else {
    return std::nullopt;
  }
  const double mu = d.mean();
  const double var = d.variance();
  return AnalyticProjection{d, var, [mu, var](double t) { return 0.5 * ((t - mu) * (t - mu) - var); },
                            0.25 * (central4 - var * var)};
}

std::optional<AnalyticProjection> diff_projection(const Distribution& d) {
  const double mu = d.mean();
  if (!std::isfinite(mu)) return std::nullopt;
  return AnalyticProjection{d, 0.0, [mu](double t) { return mu - t; }, d.variance()};
}

std::optional<AnalyticProjection> sign_diff_projection(const Distribution& d) {
  if (!d.continuous()) return std::nullopt;
  return AnalyticProjection{d, 0.0, [d](double t) { return 1.0 - 2.0 * d.cdf(t); }, 1.0 / 3.0};
}

}  // namespace

const std::vector<std::string>& builtin_kernel_ids() {
  static const std::vector<std::string> ids = {"product", "half_sq_diff", "abs_diff",
                                               "sign_sum", "diff",         "sign_diff"};
  return ids;
}

Kernel builtin_kernel(std::string_view id) {
  if (id == "product")
    return Kernel("product", [](double x, double y) { return x * y; }, Symmetry::Symmetric,
                  product_projection, 1);
  if (id == "half_sq_diff")
    return Kernel("half_sq_diff", [](double x, double y) { return 0.5 * (x - y) * (x - y); },
                  Symmetry::Symmetric, half_sq_diff_projection, 2);
  if (id == "abs_diff")
    return Kernel("abs_diff", [](double x, double y) { return std::fabs(x - y); }, Symmetry::Symmetric,
                  {}, 1);
  if (id == "sign_sum")
    return Kernel("sign_sum", [](double x, double y) { return sign(x + y); }, Symmetry::Symmetric, {}, 0);
  if (id == "diff")
    return Kernel("diff", [](double x, double y) { return x - y; }, Symmetry::Antisymmetric,
                  diff_projection, 1);
  if (id == "sign_diff")
    return Kernel("sign_diff", [](double x, double y) { return sign(x - y); }, Symmetry::Antisymmetric,
                  sign_diff_projection, 0);
  throw Error(ErrorCode::UnknownKernel, "'" + std::string(id) + "'");
}

SymmetryReport check_symmetry(const Kernel& kernel, std::size_t probes, std::uint64_t rng_seed) {
  const double s = kernel.symmetry() == Symmetry::Symmetric ? 1.0 : -1.0;
  CounterStream rng(rng_seed, 0, StreamTag::Probe);
  SymmetryReport report;
  double scale = 1.0;
  for (std::size_t i = 0; i < std::max<std::size_t>(probes, 1); ++i) {
    double x = -10.0 + 20.0 * rng.uniform();
    double y = -10.0 + 20.0 * rng.uniform();
    double hxy = kernel(x, y);
    double hyx = kernel(y, x);
    scale = std::max({scale, std::fabs(hxy), std::fabs(hyx)});
    double hxx = kernel(x, x);
    report.worst_violation =
        std::max({report.worst_violation, std::fabs(hxy - s * hyx), std::fabs(hxx - s * hxx)});
  }
  report.consistent = report.worst_violation <= 1e-12 * scale;
  return report;
}

}  // namespace ucpd
