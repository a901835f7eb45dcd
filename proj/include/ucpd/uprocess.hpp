#pragma once

#include <span>
#include <string>
#include <vector>

#include "ucpd/kernels.hpp"

namespace ucpd {

/// Ordered observations. Order is the time axis; nothing here ever sorts.
class Sample {
 public:
  /// Smallest n for which the comparison sums and the jackknife are defined.
  static constexpr std::size_t kMinSize = 3;

  /// Throws SampleTooSmall or NonFiniteValue.
  explicit Sample(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// Z_1 ... Z_{n-1} where Z_k sums h(X_i, X_j) over i <= k < j.
struct ZPath {
  std::vector<double> z;
  std::string kernel_id;
  std::size_t n = 0;
};

struct Estimates {
  double theta_hat = 0.0;
  double sigma2_hat = 0.0;
  /// r_j / (n - 1) with r_j the sum of h(X_i, X_j) over i != j.
  std::vector<double> row_means;
  /// The computed sum of h over all ordered pairs i != j (before any forcing).
  double pair_total = 0.0;
};

enum class ProcessMode { Standardized, Studentized };
enum class LimitProcess { GammaProcess, Bridge };

std::string_view to_string(LimitProcess p);
LimitProcess limit_for(Symmetry s);

/// Process values on the jump grid t_k = k / (n + 1), k = 1 ... n - 1.
struct ProcessPath {
  std::vector<double> t;
  std::vector<double> u;
  ProcessMode mode = ProcessMode::Studentized;
  LimitProcess limit = LimitProcess::GammaProcess;
};

ZPath z_path(const Sample& sample, const Kernel& kernel);
Estimates estimate(const Sample& sample, const Kernel& kernel);

/// n^{-3/2} sigma_hat^{-1} (Z_k - n^2 t_k (1 - t_k) theta_hat).
ProcessPath studentized_path(const Sample& sample, const Kernel& kernel);

/// Same with known (theta, sigma). Throws NonpositiveSigma.
ProcessPath standardized_path(const Sample& sample, const Kernel& kernel, double theta, double sigma);

/// n^{-3/2} sigma^{-1} W_k, the Hoeffding projection of the centered Z_k:
///   symmetric:     W_k = (n - k) sum_{j<=k} g(X_j) + k sum_{j>k} g(X_j)
///   antisymmetric: W_k = k sum_{j>k} g(X_j) - (n - k) sum_{j<=k} g(X_j)
ProcessPath projection_path(const Sample& sample, const Kernel& kernel, const AnalyticProjection& projection,
                            double sigma);
/// Looks the projection up on the kernel; throws MissingAnalyticProjection.
ProcessPath projection_path(const Sample& sample, const Kernel& kernel, const Distribution& scenario,
                            double sigma);

/// Hoeffding remainder psi(x, y): h - theta - g(x) - g(y) for symmetric
/// kernels, h + g(x) - g(y) for antisymmetric ones.
Kernel::Function hoeffding_remainder(const Kernel& kernel, const AnalyticProjection& projection);

/// n^{-3/2} max_k |sum_{i<=k<j} psi(X_i, X_j)|.
double remainder_max(const Sample& sample, const Kernel& kernel, const AnalyticProjection& projection);

}  // namespace ucpd
