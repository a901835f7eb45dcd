#include "ucpd/limitsim.hpp"

#include <algorithm>
#include <cmath>

#include "ucpd/errors.hpp"

namespace ucpd {

namespace {

bool is_power_of_two(std::size_t v) { return v >= 2 && (v & (v - 1)) == 0; }

void check_grid(std::size_t grid_size) {
  if (!is_power_of_two(grid_size))
    throw Error(ErrorCode::BadGrid, "grid size " + std::to_string(grid_size) + " is not a power of two >= 2");
}

/// 1 / q(j/G) for interior j; index 0 and G unused.
std::vector<double> inverse_weights(const WeightFunction& q, std::size_t grid_size) {
  std::vector<double> inv(grid_size + 1, 0.0);
  const double g = static_cast<double>(grid_size);
  for (std::size_t j = 1; j < grid_size; ++j)
    inv[j] = 1.0 / q.at(static_cast<double>(j) / g, static_cast<double>(grid_size - j) / g);
  return inv;
}

double weighted_sup_fast(std::span<const double> path, std::span<const double> inv_q) {
  double best = 0.0;
  for (std::size_t j = 1; j + 1 < path.size(); ++j) best = std::max(best, std::fabs(path[j]) * inv_q[j]);
  return best;
}

}  // namespace

std::vector<double> simulate_wiener(std::size_t grid_size, CounterStream& stream) {
  check_grid(grid_size);
  std::vector<double> w(grid_size + 1, 0.0);
  const double g = static_cast<double>(grid_size);
  w[grid_size] = stream.normal();
  for (std::size_t half = grid_size / 2; half >= 1; half /= 2) {
    // Midpoint of [j - half, j + half]: mean of the ends, variance half / (2G).
    const double sd = std::sqrt(static_cast<double>(half) / (2.0 * g));
    for (std::size_t j = half; j < grid_size; j += 2 * half)
      w[j] = 0.5 * (w[j - half] + w[j + half]) + sd * stream.normal();
  }
  return w;
}

std::vector<double> gamma_path(std::span<const double> wiener) {
  const std::size_t grid = wiener.size() - 1;
  const double g = static_cast<double>(grid);
  const double w1 = wiener.back();
  std::vector<double> out(wiener.size());
  for (std::size_t j = 0; j <= grid; ++j) {
    const double t = static_cast<double>(j) / g;
    const double s = static_cast<double>(grid - j) / g;
    out[j] = s * wiener[j] + t * (w1 - wiener[j]);
  }
  return out;
}

std::vector<double> bridge_path(std::span<const double> wiener) {
  const std::size_t grid = wiener.size() - 1;
  const double g = static_cast<double>(grid);
  const double w1 = wiener.back();
  std::vector<double> out(wiener.size());
  for (std::size_t j = 0; j <= grid; ++j) out[j] = wiener[j] - static_cast<double>(j) / g * w1;
  out[grid] = 0.0;
  return out;
}

double weighted_sup(std::span<const double> path, const WeightFunction& q) {
  if (path.size() < 3) return 0.0;
  return weighted_sup_fast(path, inverse_weights(q, path.size() - 1));
}

double empirical_quantile(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw Error(ErrorCode::BadParams, "quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * level;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

LimitLaw build_limit_law(LimitProcess process, const WeightFunction& q, std::size_t grid_size, std::size_t reps,
                         std::uint64_t master_seed, unsigned workers) {
  check_grid(grid_size);
  if (reps == 0) throw Error(ErrorCode::BadParams, "reps must be positive");
  const std::vector<double> inv_q = inverse_weights(q, grid_size);
  LimitLaw law;
  law.process = process;
  law.weight = q.spec();
  law.grid_size = grid_size;
  law.reps = reps;
  law.master_seed = master_seed;
  law.low_reps_warning = reps < kMinQuantileReps;
  law.sorted_sups.assign(reps, 0.0);
  parallel_for(reps, workers, [&](std::size_t r) {
    CounterStream stream(master_seed, r, StreamTag::LimitPath);
    const auto w = simulate_wiener(grid_size, stream);
    const auto path = process == LimitProcess::Bridge ? bridge_path(w) : gamma_path(w);
    law.sorted_sups[r] = weighted_sup_fast(path, inv_q);
  });
  std::sort(law.sorted_sups.begin(), law.sorted_sups.end());
  for (std::size_t i = 0; i < kQuantileLevels.size(); ++i) law.quantiles[i] = law.quantile(kQuantileLevels[i]);
  return law;
}

double p_value(const LimitLaw& law, double observed) {
  const auto& s = law.sorted_sups;
  const auto at_least = static_cast<double>(s.end() - std::lower_bound(s.begin(), s.end(), observed));
  return (1.0 + at_least) / (static_cast<double>(s.size()) + 1.0);
}

}  // namespace ucpd
