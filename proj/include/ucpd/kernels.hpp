#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ucpd/distributions.hpp"

namespace ucpd {

enum class Symmetry { Symmetric, Antisymmetric };

std::string_view to_string(Symmetry s);

/// Hoeffding projection of a kernel under one scenario distribution:
/// theta = E h(X1, X2), g(t) = E h(X, t) - theta, sigma2 = E g(X1)^2.
/// sigma2 is +inf when the projection has infinite variance.
struct AnalyticProjection {
  Distribution scenario;
  double theta = 0.0;
  std::function<double(double)> g;
  double sigma2 = 0.0;
};

/// Bivariate kernel h(x, y) with a declared symmetry class.
///
/// Built-in kernels know their projection for the scenario families where it
/// has a closed form; user kernels may attach a projector too. `growth_degree`
/// is the polynomial order of |h| in each argument (0 for bounded kernels) and
/// is used to certify moment conditions in experiments; unset means unknown.
class Kernel {
 public:
  using Function = std::function<double(double, double)>;
  using Projector = std::function<std::optional<AnalyticProjection>(const Distribution&)>;

  Kernel(std::string id, Function fn, Symmetry symmetry, Projector projector = {},
         std::optional<int> growth_degree = std::nullopt);

  const std::string& id() const noexcept { return id_; }
  Symmetry symmetry() const noexcept { return symmetry_; }
  std::optional<int> growth_degree() const noexcept { return growth_degree_; }

  double operator()(double x, double y) const { return fn_(x, y); }
  double evaluate(double x, double y) const { return fn_(x, y); }
  const Function& function() const noexcept { return fn_; }

  /// Projection under `scenario`, if the kernel knows one.
  std::optional<AnalyticProjection> projection(const Distribution& scenario) const;

 private:
  std::string id_;
  Function fn_;
  Symmetry symmetry_;
  Projector projector_;
  std::optional<int> growth_degree_;
};

/// sign with sign(0) = 0.
inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// One of: product, half_sq_diff, abs_diff, sign_sum, diff, sign_diff.
/// Throws Error(UnknownKernel) otherwise.
Kernel builtin_kernel(std::string_view id);

const std::vector<std::string>& builtin_kernel_ids();

struct SymmetryReport {
  bool consistent = false;
  double worst_violation = 0.0;
};

/// Probes h(x, y) against s * h(y, x) on random pairs from [-10, 10]^2,
/// with s = +1 for Symmetric and -1 for Antisymmetric kernels.
SymmetryReport check_symmetry(const Kernel& kernel, std::size_t probes, std::uint64_t rng_seed);

}  // namespace ucpd
