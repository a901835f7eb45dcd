#include "ucpd/uprocess.hpp"

#include <cmath>

#include "ucpd/errors.hpp"

namespace ucpd {

namespace {

/// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

/// right[m] = sum_{j>m} h(x_m, x_j), left[m] = sum_{i<m} h(x_i, x_m).
/// Each unordered pair is evaluated once, in the (i < j) orientation.
struct PairSums {
  std::vector<double> right;
  std::vector<double> left;
};

template <typename H>
PairSums pair_sums(std::span<const double> x, const H& h) {
  const std::size_t n = x.size();
  std::vector<CompensatedSum> columns(n);
  PairSums out{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum row;
    const double xi = x[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = h(xi, x[j]);
      row.add(v);
      columns[j].add(v);
    }
    out.right[i] = row.value();
  }
  for (std::size_t j = 0; j < n; ++j) out.left[j] = columns[j].value();
  return out;
}

/// Z_1 = right[0]; Z_{k+1} = Z_k + right[k] - left[k].
std::vector<double> z_from_pairs(const PairSums& sums) {
  const std::size_t n = sums.right.size();
  std::vector<double> z(n - 1);
  CompensatedSum running;
  running.add(sums.right[0]);
  z[0] = running.value();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    running.add(sums.right[k]);
    running.add(-sums.left[k]);
    z[k] = running.value();
  }
  return z;
}

Estimates estimates_from_pairs(const PairSums& sums, Symmetry symmetry) {
  const std::size_t n = sums.right.size();
  const double nd = static_cast<double>(n);
  // h(X_i, X_j) for i > j equals s * h(X_j, X_i).
  const double s = symmetry == Symmetry::Symmetric ? 1.0 : -1.0;
  Estimates est;
  est.row_means.resize(n);
  CompensatedSum total;
  for (std::size_t j = 0; j < n; ++j) {
    double row_total = sums.left[j] + s * sums.right[j];
    total.add(row_total);
    est.row_means[j] = row_total / (nd - 1.0);
  }
  est.pair_total = total.value();
  est.theta_hat = symmetry == Symmetry::Antisymmetric ? 0.0 : est.pair_total / (nd * (nd - 1.0));
  CompensatedSum squares;
  for (double m : est.row_means) {
    double d = m - est.theta_hat;
    squares.add(d * d);
  }
  est.sigma2_hat = squares.value() / nd;
  if (!(est.sigma2_hat > 1e-300))
    throw Error(ErrorCode::DegenerateVariance, "jackknife variance is zero (all row means identical)");
  return est;
}

void require_size(const Sample& sample) {
  if (sample.size() < Sample::kMinSize)
    throw Error(ErrorCode::SampleTooSmall, "n = " + std::to_string(sample.size()));
}

/// t_k = k/(n+1) and the centering factor n^2 t_k (1 - t_k).
ProcessPath centered_path(const std::vector<double>& z, std::size_t n, double theta, double scale,
                          ProcessMode mode, LimitProcess limit) {
  const double nd = static_cast<double>(n);
  const double np1 = nd + 1.0;
  ProcessPath path;
  path.mode = mode;
  path.limit = limit;
  path.t.resize(n - 1);
  path.u.resize(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    const double kd = static_cast<double>(k);
    path.t[k - 1] = kd / np1;
    const double centering = theta == 0.0 ? 0.0 : nd * nd * kd * (np1 - kd) / (np1 * np1) * theta;
    path.u[k - 1] = scale * (z[k - 1] - centering);
  }
  return path;
}

}  // namespace

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < kMinSize)
    throw Error(ErrorCode::SampleTooSmall,
                "n = " + std::to_string(values_.size()) + ", need at least " + std::to_string(kMinSize));
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw Error(ErrorCode::NonFiniteValue, "observation " + std::to_string(i + 1));
}

std::string_view to_string(LimitProcess p) { return p == LimitProcess::GammaProcess ? "gamma" : "bridge"; }

LimitProcess limit_for(Symmetry s) {
  return s == Symmetry::Symmetric ? LimitProcess::GammaProcess : LimitProcess::Bridge;
}

ZPath z_path(const Sample& sample, const Kernel& kernel) {
  require_size(sample);
  auto sums = pair_sums(sample.values(), kernel.function());
  return ZPath{z_from_pairs(sums), kernel.id(), sample.size()};
}

Estimates estimate(const Sample& sample, const Kernel& kernel) {
  require_size(sample);
  return estimates_from_pairs(pair_sums(sample.values(), kernel.function()), kernel.symmetry());
}

ProcessPath studentized_path(const Sample& sample, const Kernel& kernel) {
  require_size(sample);
  auto sums = pair_sums(sample.values(), kernel.function());
  Estimates est = estimates_from_pairs(sums, kernel.symmetry());
  const double n = static_cast<double>(sample.size());
  const double scale = 1.0 / (n * std::sqrt(n) * std::sqrt(est.sigma2_hat));
  return centered_path(z_from_pairs(sums), sample.size(), est.theta_hat, scale, ProcessMode::Studentized,
                       limit_for(kernel.symmetry()));
}

ProcessPath standardized_path(const Sample& sample, const Kernel& kernel, double theta, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorCode::NonpositiveSigma, "sigma must be positive and finite");
  ZPath z = z_path(sample, kernel);
  const double n = static_cast<double>(sample.size());
  return centered_path(z.z, sample.size(), theta, 1.0 / (n * std::sqrt(n) * sigma), ProcessMode::Standardized,
                       limit_for(kernel.symmetry()));
}

ProcessPath projection_path(const Sample& sample, const Kernel& kernel, const AnalyticProjection& projection,
                            double sigma) {
  require_size(sample);
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorCode::NonpositiveSigma, "sigma must be positive and finite");
  if (!projection.g) throw Error(ErrorCode::MissingAnalyticProjection, kernel.id());
  const std::size_t n = sample.size();
  std::vector<double> gx(n);
  CompensatedSum total;
  for (std::size_t i = 0; i < n; ++i) {
    gx[i] = projection.g(sample[i]);
    total.add(gx[i]);
  }
  const double all = total.value();
  const double nd = static_cast<double>(n);
  const double scale = 1.0 / (nd * std::sqrt(nd) * sigma);
  const bool symmetric = kernel.symmetry() == Symmetry::Symmetric;
  ProcessPath path;
  path.mode = ProcessMode::Standardized;
  path.limit = limit_for(kernel.symmetry());
  path.t.resize(n - 1);
  path.u.resize(n - 1);
  CompensatedSum prefix;
  for (std::size_t k = 1; k < n; ++k) {
    prefix.add(gx[k - 1]);
    const double kd = static_cast<double>(k);
    const double left = prefix.value();
    const double right = all - left;
    const double w = symmetric ? (nd - kd) * left + kd * right : kd * right - (nd - kd) * left;
    path.t[k - 1] = kd / (nd + 1.0);
    path.u[k - 1] = scale * w;
  }
  return path;
}

ProcessPath projection_path(const Sample& sample, const Kernel& kernel, const Distribution& scenario,
                            double sigma) {
  auto projection = kernel.projection(scenario);
  if (!projection)
    throw Error(ErrorCode::MissingAnalyticProjection, kernel.id() + " under " + scenario.spec());
  return projection_path(sample, kernel, *projection, sigma);
}

Kernel::Function hoeffding_remainder(const Kernel& kernel, const AnalyticProjection& projection) {
  if (!projection.g) throw Error(ErrorCode::MissingAnalyticProjection, kernel.id());
  auto h = kernel.function();
  auto g = projection.g;
  if (kernel.symmetry() == Symmetry::Symmetric) {
    const double theta = projection.theta;
    return [h, g, theta](double x, double y) { return h(x, y) - theta - g(x) - g(y); };
  }
  return [h, g](double x, double y) { return h(x, y) - (g(y) - g(x)); };
}

double remainder_max(const Sample& sample, const Kernel& kernel, const AnalyticProjection& projection) {
  require_size(sample);
  const std::size_t n = sample.size();
  // g is evaluated once per observation rather than once per pair.
  std::vector<double> gx(n);
  for (std::size_t i = 0; i < n; ++i) gx[i] = projection.g(sample[i]);
  const auto& h = kernel.function();
  const bool symmetric = kernel.symmetry() == Symmetry::Symmetric;
  const double theta = projection.theta;
  // pair_sums walks values; feeding it indices lets psi reuse the cached g.
  std::vector<double> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<double>(i);
  auto psi = [&](double a, double b) {
    auto i = static_cast<std::size_t>(a);
    auto j = static_cast<std::size_t>(b);
    double hv = h(sample[i], sample[j]);
    return symmetric ? hv - theta - gx[i] - gx[j] : hv - (gx[j] - gx[i]);
  };
  std::vector<double> z = z_from_pairs(pair_sums(idx, psi));
  double worst = 0.0;
  for (double v : z) worst = std::max(worst, std::fabs(v));
  const double nd = static_cast<double>(n);
  return worst / (nd * std::sqrt(nd));
}

}  // namespace ucpd
