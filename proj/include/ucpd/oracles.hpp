#pragma once

#include <span>
#include <vector>

#include "ucpd/kernels.hpp"

// Reference computations that deliberately share no code with the library's
// fast paths. Verification compares against these.
namespace ucpd::oracle {

/// Z_k by plain nested loops over i <= k < j, for k = 1 ... n-1.
std::vector<double> z_brute_force(std::span<const double> x, const Kernel::Function& h);

struct BruteEstimates {
  double theta_hat = 0.0;
  double sigma2_hat = 0.0;
  std::vector<double> row_means;
};

/// Definitional double loops, evaluating h in both orientations.
/// theta_hat is forced to 0 when `antisymmetric`.
BruteEstimates estimate_brute_force(std::span<const double> x, const Kernel::Function& h, bool antisymmetric);

/// P(sup_{0<=t<=1} |B(t)| <= x) = 1 - 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_cdf(double x);
/// Inverse of kolmogorov_cdf by bisection.
double kolmogorov_quantile(double p);

}  // namespace ucpd::oracle
