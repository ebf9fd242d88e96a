#include "fredlab/tails.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fredlab/parallel.hpp"
#include "fredlab/spectral.hpp"

namespace fredlab {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  const double den = n * sxx - sx * sx;
  f.slope = den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

std::vector<double> resolve_thresholds(const std::vector<double>& given, const std::vector<double>& samples,
                                       double quantile, int decades, int per_decade) {
  if (!given.empty()) return given;
  const double top = sample_quantile(samples, quantile);
  if (!(top > 0.0)) return {top};
  return log_thresholds(top, decades, per_decade);
}

}  // namespace

bool TailEstimate::monotone() const {
  for (std::size_t i = 1; i < empirical_probability.size(); ++i) {
    const double prev = empirical_probability[i - 1];
    const double cur = empirical_probability[i];
    if (kind == TailKind::cdf ? cur < prev : cur > prev) return false;
  }
  return true;
}

std::pair<double, double> wilson_interval(std::size_t hits, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double den = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / den;
  const double half = z / den * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

TailEstimate tail_from_samples(std::vector<double> samples, std::vector<double> thresholds, TailKind kind) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw std::invalid_argument("tail: thresholds must be ascending");
  }
  TailEstimate t;
  t.kind = kind;
  t.n_trials = samples.size();
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  for (double a : thresholds) {
    const auto below = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), a) - sorted.begin());
    const auto at_least = static_cast<std::size_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), a));
    const std::size_t hits = kind == TailKind::cdf ? below : at_least;
    t.hits.push_back(hits);
    t.empirical_probability.push_back(t.n_trials ? static_cast<double>(hits) / static_cast<double>(t.n_trials) : 0.0);
    t.wilson_ci.push_back(wilson_interval(hits, t.n_trials));
  }
  t.thresholds = std::move(thresholds);
  t.samples = std::move(samples);
  return t;
}

std::vector<double> log_thresholds(double top, int decades, int per_decade) {
  if (!(top > 0.0) || decades < 1 || per_decade < 1) throw std::invalid_argument("log_thresholds: bad arguments");
  std::vector<double> out;
  const int n = decades * per_decade;
  for (int i = n; i >= 0; --i) out.push_back(top * std::pow(10.0, -static_cast<double>(i) / per_decade));
  return out;
}

double sample_quantile(std::vector<double> samples, double q) {
  if (samples.empty()) throw std::invalid_argument("sample_quantile: no samples");
  std::sort(samples.begin(), samples.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(samples.size())));
  return samples[std::min(samples.size() - 1, rank > 0 ? rank - 1 : 0)];
}

TailEstimate hs_norm_tail(const HsTailConfig& config) {
  const Eigen::Index dim = config.s1.size();
  if (dim < 1 || config.s2.size() != dim) throw std::invalid_argument("hs_norm_tail: multiplier sizes disagree");
  const Eigen::VectorXd w1 = config.s1.cwiseAbs2();
  const Eigen::VectorXd w2 = config.s2.cwiseAbs2();
  std::vector<double> samples(config.n_trials);
  parallel_for(config.n_trials, config.threads, [&](std::size_t i) {
    const CMatrix g = sample_gaussian(dim, derive_seed(config.root_seed, {i}));
    samples[i] = (w1.asDiagonal() * g.cwiseAbs2() * w2.asDiagonal()).sum();
  });
  TailEstimate t = tail_from_samples(std::move(samples), config.thresholds, TailKind::survival);

  const double hs1 = w1.sum();
  const double hs2 = w2.sum();
  const double op1 = config.s1.cwiseAbs().maxCoeff();
  const double op2 = config.s2.cwiseAbs().maxCoeff();
  for (double a : t.thresholds) {
    t.bound.push_back(config.c0 * std::exp((config.c0 * hs1 * hs2 - a) / (2.0 * op1 * op2)));
  }
  return t;
}

TailEstimate det_tail(const DetTailConfig& config) {
  const Eigen::Index n = config.d_matrix.rows();
  if (n < 1 || config.d_matrix.cols() != n) throw std::invalid_argument("det_tail: D must be square and nonempty");
  if (n > kMaxDetDimension) {
    throw std::invalid_argument("det_tail: dimension " + std::to_string(n) + " exceeds " +
                                std::to_string(kMaxDetDimension));
  }
  std::vector<double> samples(config.n_trials);
  parallel_for(config.n_trials, config.threads, [&](std::size_t i) {
    const CMatrix g = sample_gaussian(n, derive_seed(config.root_seed, {i}));
    samples[i] = std::exp(log_abs_det(config.d_matrix + g));
  });
  auto th = resolve_thresholds(config.thresholds, samples, config.auto_quantile, config.decades, config.per_decade);
  return tail_from_samples(std::move(samples), std::move(th), TailKind::cdf);
}

SingularRegime singular_regime(const CMatrix& a, cplx z0, double alpha, double delta, double c2) {
  const auto sv = singular_values(CMatrix(a - z0 * CMatrix::Identity(a.rows(), a.cols())));
  SingularRegime r;
  for (Eigen::Index i = 0; i < sv.values.size(); ++i) {
    if (sv.values(i) * sv.values(i) <= alpha) ++r.n_small;
  }
  const double n = r.n_small;
  r.max_threshold = std::pow(n, n * c2) * std::pow(delta, n) * std::pow(alpha, -(n - 2.0) / 2.0);
  return r;
}

TailEstimate smallest_singular_tail(const SingularTailConfig& config) {
  const Eigen::Index dim = config.a.rows();
  if (dim < 1 || config.a.cols() != dim || config.s1.dim() != dim || config.s2.dim() != dim) {
    throw std::invalid_argument("smallest_singular_tail: dimensions disagree");
  }
  if (!(config.delta >= 0.0)) throw std::invalid_argument("smallest_singular_tail: delta must be nonnegative");
  const CMatrix base = config.a - config.z0 * CMatrix::Identity(dim, dim);
  std::vector<double> samples(config.n_trials);
  if (config.delta == 0.0) {
    std::fill(samples.begin(), samples.end(), smallest_singular_value(base));
  } else {
    parallel_for(config.n_trials, config.threads, [&](std::size_t i) {
      const std::uint64_t seed = derive_seed(config.root_seed, {i});
      const auto q = assemble_q(config.s1, sample_gaussian(dim, seed), config.s2, config.delta, seed);
      samples[i] = smallest_singular_value(base + config.delta * q.q_matrix);
    });
  }
  auto th = resolve_thresholds(config.thresholds, samples, config.auto_quantile, config.decades, config.per_decade);
  TailEstimate t = tail_from_samples(std::move(samples), std::move(th), TailKind::cdf);
  const SingularRegime regime = singular_regime(config.a, config.z0, config.alpha, config.delta, config.c2);
  for (double a : t.thresholds) t.in_regime.push_back(a <= regime.max_threshold);
  return t;
}

DecadeFit fit_smallest_decade(const TailEstimate& t, std::size_t min_hits) {
  DecadeFit f;
  std::size_t first = t.thresholds.size();
  for (std::size_t i = 0; i < t.thresholds.size(); ++i) {
    if (t.hits[i] >= min_hits && t.thresholds[i] > 0.0) {
      first = i;
      break;
    }
  }
  if (first == t.thresholds.size()) return f;
  f.lo = t.thresholds[first];
  f.hi = 10.0 * f.lo * (1.0 + 1e-12);
  std::vector<double> x, y;
  for (std::size_t i = first; i < t.thresholds.size() && t.thresholds[i] <= f.hi; ++i) {
    x.push_back(std::log(t.thresholds[i]));
    y.push_back(std::log(t.empirical_probability[i]));
  }
  f.points = x.size();
  if (f.points < 2) return f;
  f.slope = least_squares(x, y).slope;
  f.ok = true;
  return f;
}

RatioCheck ratio_over_threshold(const TailEstimate& t, int decades, double factor) {
  RatioCheck r;
  if (t.thresholds.empty()) return r;
  const double top = t.thresholds.back();
  const double lo = top * std::pow(10.0, -decades) * (1.0 - 1e-12);
  r.top_ratio = t.empirical_probability.back() / top;
  for (std::size_t i = 0; i < t.thresholds.size(); ++i) {
    if (t.thresholds[i] < lo || t.hits[i] == 0) continue;
    r.max_ratio = std::max(r.max_ratio, t.empirical_probability[i] / t.thresholds[i]);
    ++r.points;
  }
  r.bounded = r.points >= 2 && r.top_ratio > 0.0 && r.max_ratio <= factor * r.top_ratio;
  return r;
}

DecayCheck decay_beyond(const TailEstimate& t, double start, std::size_t min_hits, double margin) {
  DecayCheck d;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.thresholds.size(); ++i) {
    if (t.thresholds[i] < start || t.hits[i] < min_hits) continue;
    x.push_back(t.thresholds[i]);
    y.push_back(std::log(t.empirical_probability[i]));
  }
  d.points = x.size();
  if (d.points < 3) return d;
  const LineFit f = least_squares(x, y);
  d.slope = f.slope;
  d.last_excess = y.back() - (f.intercept + f.slope * x.back());
  d.ok = d.slope < 0.0 && d.last_excess <= margin;
  return d;
}

}  // namespace fredlab
