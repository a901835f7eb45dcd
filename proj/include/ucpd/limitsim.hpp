#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ucpd/parallel.hpp"
#include "ucpd/random.hpp"
#include "ucpd/uprocess.hpp"
#include "ucpd/weights.hpp"

namespace ucpd {

/// Standard Wiener path on {j / grid_size : j = 0 ... grid_size}.
///
/// Built by dyadic midpoint refinement (Levy construction): W(1) first, then
/// each level's midpoints from their neighbours. The first G normals of a
/// stream always produce the same values at the points of a G-grid, so a
/// 2G-grid path drawn from the same stream refines the G-grid path.
/// Throws BadGrid unless grid_size >= 2 is a power of two.
std::vector<double> simulate_wiener(std::size_t grid_size, CounterStream& stream);

/// Gamma(t) = (1 - t) W(t) + t (W(1) - W(t)).
std::vector<double> gamma_path(std::span<const double> wiener);
/// B(t) = W(t) - t W(1).
std::vector<double> bridge_path(std::span<const double> wiener);

/// max over interior grid points j = 1 ... G-1 of |path(t_j)| / q(t_j), where
/// the path holds values at t_j = j / G, j = 0 ... G.
double weighted_sup(std::span<const double> path, const WeightFunction& q);

/// Type-7 empirical quantile (linear interpolation between order statistics).
double empirical_quantile(std::span<const double> sorted, double level);

inline constexpr std::array<double, 5> kQuantileLevels = {0.80, 0.90, 0.95, 0.975, 0.99};
inline constexpr std::size_t kMinQuantileReps = 1000;

/// Monte Carlo law of sup |X(t)| / q(t) for X the Gamma process or the bridge.
struct LimitLaw {
  LimitProcess process = LimitProcess::Bridge;
  std::string weight;
  std::size_t grid_size = 0;
  std::size_t reps = 0;
  std::uint64_t master_seed = 0;
  std::vector<double> sorted_sups;
  std::array<double, kQuantileLevels.size()> quantiles{};
  bool low_reps_warning = false;

  /// Type-7 quantile of sorted_sups at any level.
  double quantile(double level) const { return empirical_quantile(sorted_sups, level); }
};

/// Rep r draws its path from CounterStream(master_seed, r). Output is
/// bit-identical for any worker count. Throws BadGrid, BadParams (reps == 0).
LimitLaw build_limit_law(LimitProcess process, const WeightFunction& q, std::size_t grid_size, std::size_t reps,
                         std::uint64_t master_seed, unsigned workers = default_workers());

/// Add-one Monte Carlo p-value (1 + #{sups >= observed}) / (reps + 1).
double p_value(const LimitLaw& law, double observed);

}  // namespace ucpd
