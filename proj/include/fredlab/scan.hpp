#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fredlab/lattice.hpp"
#include "fredlab/perturb.hpp"

namespace fredlab {

/// Approximate 1/h values at which accumulation is expected for beta = 1.
inline constexpr double kMagicInvH[2] = {0.586, 2.221};
inline constexpr double kMagicWindow = 0.05;

struct ScanConfig {
  std::vector<double> inv_h_grid;
  cplx beta{1.0, 0.0};
  int K = 7;
  cplx disk_center{0.0, 0.0};
  double disk_radius = 2.0;
  std::vector<double> delta_list{0.0};
  int trials_per_point = 1;
  std::uint64_t root_seed = 0;
  int threads = 1;
  /// Multiplier profile for both S1 and S2; the default cutoff when absent.
  std::optional<CutoffSpec> cutoff;
  /// Spike detection: moving median window and the two frozen ratios.
  int median_window = 11;
  double spike_ratio = 3.0;
  double washout_ratio = 1.5;
  /// wall_ms is written as 0 unless this is set, so outputs stay comparable.
  bool record_timing = false;

  void validate() const;
};

/// Evenly spaced grid start, start + step, ... up to stop (inclusive within
/// step/1000), built from integer multiples to avoid accumulated rounding.
std::vector<double> make_grid(double start, double stop, double step);

struct ScanRow {
  double inv_h = 0.0;
  double delta = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> count_in_disk;  // empty when the decomposition failed
  double min_abs_eig = 0.0;
  double wall_ms = 0.0;
  std::string error;
};

struct ScanResult {
  std::vector<ScanRow> rows;  // grid index, then delta index, then trial
  std::size_t gaussian_draws = 0;
  double total_wall_seconds = 0.0;
};

/// Rows for every (1/h, delta, trial). Rows with delta = 0 are computed once,
/// as trial 0 with seed 0, and never sample a Gaussian.
ScanResult magic_scan(const ScanConfig& config);

struct SpikeReport {
  std::vector<double> series;
  std::vector<double> median;
  std::vector<double> ratio;  // series / max(median, 1)
  std::vector<std::size_t> flagged;
};

/// Moving median over `window` points (truncated at the ends), then flags
/// local maxima of the ratio that exceed `threshold`. A local maximum is >=
/// both neighbours and > at least one.
SpikeReport detect_spikes(const std::vector<double>& series, int window, double threshold);

struct DeltaSummary {
  double delta = 0.0;
  SpikeReport spikes;
  double threshold = 0.0;
  std::vector<double> flagged_inv_h;
  bool near_magic[2] = {false, false};
  std::size_t failed_rows = 0;
};

/// Per-delta count series (mean over trials) with spikes flagged at
/// spike_ratio for delta = 0 and washout_ratio otherwise.
std::vector<DeltaSummary> summarize_scan(const ScanConfig& config, const ScanResult& result);

struct WashoutConfig {
  double inv_h = 0.586;
  cplx beta{1.0, 0.0};
  int K = 12;
  std::vector<double> delta_list{0.0, 1e-7, 1e-4, 1e-2};
  int n_eigs = 600;
  std::uint64_t root_seed = 0;
  int threads = 1;
  std::optional<CutoffSpec> cutoff;
  /// Central disk radius; half the smallest nonzero h|k| when absent.
  std::optional<double> radius;

  void validate() const;
};

struct WashoutPanel {
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::vector<cplx> smallest;  // n_eigs eigenvalues of least modulus, ascending |.|
  std::size_t count_in_radius = 0;
  std::string error;
};

struct WashoutResult {
  double radius = 0.0;
  Eigen::Index dim = 0;
  std::vector<WashoutPanel> panels;
};

/// Half of min |h k| over nonzero dual lattice points.
double central_radius(const LatticeSpec& spec, double h);

WashoutResult washout_experiment(const WashoutConfig& config);

}  // namespace fredlab
