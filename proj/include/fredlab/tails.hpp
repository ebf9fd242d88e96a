#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fredlab/models.hpp"
#include "fredlab/perturb.hpp"

namespace fredlab {

/// cdf counts samples <= threshold, survival counts samples >= threshold.
enum class TailKind { cdf, survival };

struct TailEstimate {
  TailKind kind = TailKind::cdf;
  std::vector<double> thresholds;  // ascending
  std::vector<std::size_t> hits;
  std::vector<double> empirical_probability;
  std::vector<std::pair<double, double>> wilson_ci;
  std::size_t n_trials = 0;
  std::vector<double> samples;  // statistic per trial, in trial order
  /// Optional comparison columns; empty when the tail has none.
  std::vector<double> bound;
  std::vector<bool> in_regime;

  /// cdf: nondecreasing in the threshold; survival: nonincreasing.
  bool monotone() const;
};

/// 95% Wilson score interval by default.
std::pair<double, double> wilson_interval(std::size_t hits, std::size_t n, double z = 1.959963984540054);

TailEstimate tail_from_samples(std::vector<double> samples, std::vector<double> thresholds, TailKind kind);

/// `per_decade` log-spaced points from top / 10^decades up to top.
std::vector<double> log_thresholds(double top, int decades, int per_decade);

/// Empirical q-quantile (nearest rank) of a sample.
double sample_quantile(std::vector<double> samples, double q);

struct HsTailConfig {
  Eigen::VectorXd s1;  // diagonal multipliers; dim = size
  Eigen::VectorXd s2;
  std::size_t n_trials = 1000;
  std::vector<double> thresholds;
  std::uint64_t root_seed = 0;
  double c0 = 1.0;
  int threads = 1;
};

/// Survival of ‖S1 G S2‖_HS^2, with the bound
/// C0 exp((C0 ‖S1‖_HS^2 ‖S2‖_HS^2 - a) / (2 ‖S1‖ ‖S2‖)) in `bound`.
TailEstimate hs_norm_tail(const HsTailConfig& config);

struct DetTailConfig {
  CMatrix d_matrix;  // N x N deterministic part
  std::size_t n_trials = 1000;
  /// Empty: top = auto_quantile of |det|, `decades` decades below it.
  std::vector<double> thresholds;
  double auto_quantile = 0.1;
  int decades = 2;
  int per_decade = 8;
  std::uint64_t root_seed = 0;
  int threads = 1;
};

inline constexpr int kMaxDetDimension = 60;

/// CDF of |det(D + G)| with G complex Gaussian. |det| is formed from log|det|.
TailEstimate det_tail(const DetTailConfig& config);

struct SingularTailConfig {
  CMatrix a;
  cplx z0{};
  MultiplierMatrix s1;
  MultiplierMatrix s2;
  double alpha = 1.0;
  double delta = 1e-3;
  std::size_t n_trials = 1000;
  std::vector<double> thresholds;  // empty: automatic, as for DetTailConfig
  double auto_quantile = 0.5;
  int decades = 3;
  int per_decade = 8;
  std::uint64_t root_seed = 0;
  double c2 = 1.0;
  int threads = 1;
};

/// N = #{t^2 <= alpha} for A - z0 and the largest threshold the tail bound
/// speaks to: N^(N c2) delta^N alpha^(-(N - 2)/2).
struct SingularRegime {
  int n_small = 0;
  double max_threshold = 0.0;
};
SingularRegime singular_regime(const CMatrix& a, cplx z0, double alpha, double delta, double c2);

/// CDF of t_1(A + delta S1 G S2 - z0). Thresholds beyond the regime bound
/// are kept and marked false in `in_regime`.
TailEstimate smallest_singular_tail(const SingularTailConfig& config);

struct DecadeFit {
  bool ok = false;
  double lo = 0.0;
  double hi = 0.0;
  double slope = 0.0;
  std::size_t points = 0;
};

/// Least-squares slope of log P against log threshold over [lo, 10 lo], lo
/// being the smallest threshold with at least min_hits hits.
DecadeFit fit_smallest_decade(const TailEstimate& t, std::size_t min_hits = 20);

struct RatioCheck {
  double top_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t points = 0;
  bool bounded = false;
};

/// P(stat <= c)/c over the populated thresholds in [top/10^decades, top]:
/// bounded when no ratio exceeds `factor` times the ratio at the top.
RatioCheck ratio_over_threshold(const TailEstimate& t, int decades = 2, double factor = 3.0);

struct DecayCheck {
  double slope = 0.0;
  double last_excess = 0.0;  // residual of the last point above the line
  std::size_t points = 0;
  bool ok = false;
};

/// Fits log P linearly in the threshold beyond `start` (points with at least
/// min_hits hits). Decay is at least linear when the slope is negative and the
/// farthest point does not sit more than `margin` above the fitted line.
DecayCheck decay_beyond(const TailEstimate& t, double start, std::size_t min_hits = 20, double margin = 0.5);

}  // namespace fredlab
