#include "ucpd/oracles.hpp"

#include <cmath>

namespace ucpd::oracle {

std::vector<double> z_brute_force(std::span<const double> x, const Kernel::Function& h) {
  const std::size_t n = x.size();
  std::vector<double> z;
  for (std::size_t k = 1; k < n; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = k; j < n; ++j) sum += h(x[i], x[j]);
    z.push_back(sum);
  }
  return z;
}

BruteEstimates estimate_brute_force(std::span<const double> x, const Kernel::Function& h, bool antisymmetric) {
  const std::size_t n = x.size();
  const double nd = static_cast<double>(n);
  BruteEstimates out;
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double row = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (i != j) row += h(x[i], x[j]);
    out.row_means.push_back(row / (nd - 1.0));
    total += row;
  }
  out.theta_hat = antisymmetric ? 0.0 : total / (nd * (nd - 1.0));
  double ss = 0.0;
  for (double m : out.row_means) ss += (m - out.theta_hat) * (m - out.theta_hat);
  out.sigma2_hat = ss / nd;
  return out;
}

double kolmogorov_cdf(double x) {
  if (x <= 0.0) return 0.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return 1.0 - 2.0 * sum;
}

double kolmogorov_quantile(double p) {
  double lo = 0.2;
  double hi = 5.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace ucpd::oracle
