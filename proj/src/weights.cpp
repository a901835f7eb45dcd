#include "ucpd/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ucpd/errors.hpp"
#include "ucpd/format.hpp"

namespace ucpd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kLn2 = std::log(2.0);

template <typename F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson quadrature with an absolute tolerance.
template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 40);
}

struct EndpointTail {
  Verdict verdict = Verdict::Inconclusive;
  double partial = 0.0;
  double tail = kNaN;
  double exponent = kNaN;
};

/// Classifies the dyadic shell increments a[m] = integral over [2^-m-1, 2^-m]
/// (stored from m = 2) at one endpoint.
EndpointTail judge_tail(const std::vector<double>& a, const ClassifyOptions& opt) {
  EndpointTail out;
  for (double v : a) out.partial += v;
  const int first = 2;
  const int last = first + static_cast<int>(a.size()) - 1;
  auto at = [&](int m) { return a[static_cast<std::size_t>(m - first)]; };
  if (!std::isfinite(out.partial) || out.partial > opt.overflow_cap) {
    out.verdict = Verdict::Divergent;
    out.tail = kInf;
    out.exponent = 0.0;
    return out;
  }
  const double a_last = at(last);
  if (a_last == 0.0) {
    out.verdict = Verdict::Finite;
    out.tail = 0.0;
    out.exponent = kInf;
    return out;
  }
  const int half = last / 2;
  const double a_half = at(half);
  if (a_half == 0.0) return out;
  out.exponent = -std::log(a_last / a_half) / std::log(static_cast<double>(last) / half);
  const double ratio = std::pow(a_last / at(last - 5), 0.2);
  if (ratio < 0.95) {
    out.verdict = Verdict::Finite;
    out.tail = a_last * ratio / (1.0 - ratio);
  } else if (out.exponent > 1.0 + opt.exponent_margin) {
    out.verdict = Verdict::Finite;
    out.tail = a_last * last / (out.exponent - 1.0);
  } else if (out.exponent < 1.0 - opt.exponent_margin) {
    out.verdict = Verdict::Divergent;
    out.tail = kInf;
  }
  return out;
}

}  // namespace

WeightFunction::WeightFunction(std::string spec, Evaluator eval, double monotone_zone)
    : spec_(std::move(spec)), eval_(std::move(eval)), monotone_zone_(monotone_zone) {}

WeightFunction constant_one() {
  return WeightFunction("one", [](double, double) { return 1.0; });
}

WeightFunction power_weight(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw Error(ErrorCode::BadParams, "power weight needs nu > 0");
  return WeightFunction("pow:" + format_real(nu), [nu](double t, double s) { return std::pow(t * s, nu); });
}

WeightFunction loglog_weight(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::BadParams, "loglog weight needs lambda > 0");
  // log(e^e / (t(1-t))) = e - log t - log(1-t) >= e, so the outer log is >= 1.
  return WeightFunction("loglog:" + format_real(lambda), [lambda](double t, double s) {
    const double inner = std::exp(1.0) - std::log(t) - std::log(s);
    return std::sqrt(lambda * t * s * std::log(inner));
  });
}

WeightFunction builtin_weight(std::string_view id, std::span<const double> params) {
  if (id == "constant_one" || id == "one") {
    if (!params.empty()) throw Error(ErrorCode::BadParams, "constant_one takes no parameters");
    return constant_one();
  }
  if (params.size() != 1) throw Error(ErrorCode::BadParams, std::string(id) + " takes one parameter");
  if (id == "power" || id == "pow") return power_weight(params[0]);
  if (id == "loglog") return loglog_weight(params[0]);
  throw Error(ErrorCode::BadParams, "unknown weight '" + std::string(id) + "'");
}

WeightFunction parse_weight(std::string_view spec) {
  auto colon = spec.find(':');
  std::string_view name = spec.substr(0, colon);
  if (colon == std::string_view::npos) return builtin_weight(name);
  double value = 0.0;
  try {
    value = parse_real(spec.substr(colon + 1));
  } catch (const ParseError&) {
    throw Error(ErrorCode::BadParams, "bad weight parameter in '" + std::string(spec) + "'");
  }
  if (name == "one") throw Error(ErrorCode::BadParams, "'one' takes no parameter");
  const double params[] = {value};
  return builtin_weight(name, params);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Finite: return "Finite";
    case Verdict::Divergent: return "Divergent";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string_view to_string(ClassSummary s) {
  switch (s) {
    case ClassSummary::FiniteForAllTested: return "FiniteForAllTested";
    case ClassSummary::FiniteForSomeNotAll: return "FiniteForSomeNotAll";
    case ClassSummary::DivergentForAllTested: return "DivergentForAllTested";
    case ClassSummary::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const std::vector<double>& default_c_grid() {
  static const std::vector<double> grid = {0.01, 0.1, 1.0, 10.0};
  return grid;
}

CVerdict classify_one(const WeightFunction& q, double c, const ClassifyOptions& opt) {
  // Substituting t = e^-s near each endpoint turns dt / (t(1-t)) into
  // ds / (1-t), so the shell integrands stay bounded by 2.
  auto left = [&](double s) {
    const double t = std::exp(-s);
    const double omt = 1.0 - t;
    const double w = q.at(t, omt);
    return std::exp(-c * w * w / (t * omt)) / omt;
  };
  auto right = [&](double s) {
    const double u = std::exp(-s);
    const double omu = 1.0 - u;
    const double w = q.at(omu, u);
    return std::exp(-c * w * w / (u * omu)) / omu;
  };
  auto middle = [&](double t) {
    const double omt = 1.0 - t;
    const double w = q.at(t, omt);
    return std::exp(-c * w * w / (t * omt)) / (t * omt);
  };

  std::vector<double> a_left;
  std::vector<double> a_right;
  a_left.reserve(static_cast<std::size_t>(opt.m_max));
  a_right.reserve(static_cast<std::size_t>(opt.m_max));
  for (int m = 2; m <= opt.m_max; ++m) {
    const double lo = m * kLn2;
    const double hi = (m + 1) * kLn2;
    a_left.push_back(integrate(left, lo, hi, opt.abs_tol));
    a_right.push_back(integrate(right, lo, hi, opt.abs_tol));
  }
  const double center = integrate(middle, 0.25, 0.75, opt.abs_tol);
  EndpointTail l = judge_tail(a_left, opt);
  EndpointTail r = judge_tail(a_right, opt);

  CVerdict out;
  out.c = c;
  out.partial_integral = center + l.partial + r.partial;
  out.decay_exponent = std::fmin(l.exponent, r.exponent);
  if (l.verdict == Verdict::Divergent || r.verdict == Verdict::Divergent) {
    out.verdict = Verdict::Divergent;
    out.tail_estimate = kInf;
  } else if (l.verdict == Verdict::Finite && r.verdict == Verdict::Finite) {
    out.verdict = Verdict::Finite;
    out.tail_estimate = out.partial_integral + l.tail + r.tail;
  } else {
    out.verdict = Verdict::Inconclusive;
    out.tail_estimate = kNaN;
  }
  return out;
}

WeightClassification classify(const WeightFunction& q, std::span<const double> c_grid,
                              const ClassifyOptions& options) {
  if (c_grid.empty()) throw Error(ErrorCode::BadParams, "empty c grid");
  for (std::size_t i = 0; i < c_grid.size(); ++i) {
    if (!(c_grid[i] > 0.0) || !std::isfinite(c_grid[i])) throw Error(ErrorCode::BadParams, "c must be > 0");
    if (i > 0 && !(c_grid[i] > c_grid[i - 1])) throw Error(ErrorCode::BadParams, "c grid must be ascending");
  }
  WeightClassification out;
  out.weight = q.spec();
  std::size_t finite = 0;
  std::size_t divergent = 0;
  for (double c : c_grid) {
    out.verdicts.push_back(classify_one(q, c, options));
    finite += out.verdicts.back().verdict == Verdict::Finite;
    divergent += out.verdicts.back().verdict == Verdict::Divergent;
  }
  const std::size_t n = c_grid.size();
  if (finite == n)
    out.summary = ClassSummary::FiniteForAllTested;
  else if (divergent == n)
    out.summary = ClassSummary::DivergentForAllTested;
  else if (finite > 0)
    out.summary = ClassSummary::FiniteForSomeNotAll;
  else
    out.summary = ClassSummary::Inconclusive;

  if (out.summary == ClassSummary::FiniteForSomeNotAll) {
    auto first_finite = std::find_if(out.verdicts.begin(), out.verdicts.end(),
                                     [](const CVerdict& v) { return v.verdict == Verdict::Finite; });
    if (first_finite != out.verdicts.begin()) {
      double hi = first_finite->c;
      double lo = std::prev(first_finite)->c;
      for (int step = 0; step < options.bisection_steps && hi - lo > 1e-3 * hi; ++step) {
        const double mid = 0.5 * (lo + hi);
        Verdict v = classify_one(q, mid, options).verdict;
        if (v == Verdict::Finite) {
          hi = mid;
        } else if (v == Verdict::Divergent) {
          lo = mid;
        } else {
          lo = hi = mid;
        }
      }
      out.c_threshold = 0.5 * (lo + hi);
    }
  }
  return out;
}

Lemma3Report lemma3_check(const WeightFunction& q, int m_max) {
  constexpr int m_first = 4;
  m_max = std::max(m_max, 2 * m_first + 4);
  auto judge = [&](bool left_end) {
    std::vector<double> r;
    for (int m = m_first; m <= m_max; ++m) {
      const double t = std::ldexp(1.0, -m);
      const double w = left_end ? q.at(t, 1.0 - t) : q.at(1.0 - t, t);
      r.push_back(std::sqrt(t) / w);
    }
    auto at = [&](int m) { return r[static_cast<std::size_t>(m - m_first)]; };
    // Eventually decreasing: nonincreasing over the second half, with a
    // strict overall drop.
    const int mid = (m_first + m_max) / 2;
    for (int m = mid; m < m_max; ++m)
      if (!(at(m + 1) <= at(m))) return false;
    if (!(at(m_max) < at(mid))) return false;
    if (at(m_max) < 0.01 * at(m_first)) return true;
    // Slowly varying decay (e.g. 1/sqrt(log log)) never reaches 1% of the
    // start on a representable grid. Accept it when the log-ratio keeps
    // falling at a comparable pace over the later geometric half of m, which
    // a sequence settling on a positive limit does not.
    const int geo = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m_first) * m_max)));
    const double early = std::log(at(m_first)) - std::log(at(geo));
    const double late = std::log(at(geo)) - std::log(at(m_max));
    return early > 0.0 && late >= 0.25 * early;
  };
  return Lemma3Report{judge(true), judge(false)};
}

}  // namespace ucpd
