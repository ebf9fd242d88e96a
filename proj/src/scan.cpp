#include "fredlab/scan.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fredlab/models.hpp"
#include "fredlab/parallel.hpp"
#include "fredlab/spectral.hpp"

namespace fredlab {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

// A + delta * S G S with S = chi(h|D|) on both sides.
CMatrix perturbed(const OperatorMatrix& a, const MultiplierMatrix& s, double delta, std::uint64_t seed) {
  const CMatrix g = sample_gaussian(a.dim(), seed);
  return a.entries + delta * assemble_q(s, g, s, delta, seed).q_matrix;
}

}  // namespace

void ScanConfig::validate() const {
  if (inv_h_grid.empty()) throw std::invalid_argument("scan: inv_h_grid is empty");
  for (std::size_t i = 0; i < inv_h_grid.size(); ++i) {
    if (!(inv_h_grid[i] > 0.0)) throw std::invalid_argument("scan: inv_h values must be positive");
    if (i > 0 && !(inv_h_grid[i] > inv_h_grid[i - 1])) throw std::invalid_argument("scan: inv_h_grid must be strictly ascending");
  }
  if (K < 0) throw std::invalid_argument("scan: K must be nonnegative");
  if (!(disk_radius >= 0.0)) throw std::invalid_argument("scan: disk_radius must be nonnegative");
  if (delta_list.empty()) throw std::invalid_argument("scan: delta_list is empty");
  for (double d : delta_list) {
    if (!(d >= 0.0)) throw std::invalid_argument("scan: deltas must be nonnegative");
  }
  if (trials_per_point < 1) throw std::invalid_argument("scan: trials_per_point must be at least 1");
  if (median_window < 1) throw std::invalid_argument("scan: median_window must be at least 1");
  if (cutoff) cutoff->validate();
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw std::invalid_argument("make_grid: need step > 0 and stop >= start");
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-3));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

ScanResult magic_scan(const ScanConfig& config) {
  config.validate();
  const auto total_start = std::chrono::steady_clock::now();
  const LatticeSpec spec = make_lattice();
  const TruncationBasis basis(config.K);
  const CutoffSpec cutoff = config.cutoff ? *config.cutoff : default_cutoff(spec, config.beta);

  struct Task {
    std::size_t grid;
    std::size_t delta;
    int trial;
  };
  std::vector<Task> tasks;
  for (std::size_t g = 0; g < config.inv_h_grid.size(); ++g) {
    for (std::size_t d = 0; d < config.delta_list.size(); ++d) {
      const int trials = config.delta_list[d] == 0.0 ? 1 : config.trials_per_point;
      for (int t = 0; t < trials; ++t) tasks.push_back({g, d, t});
    }
  }

  ScanResult result;
  result.rows.resize(tasks.size());
  std::atomic<std::size_t> draws{0};

  parallel_for(tasks.size(), config.threads, [&](std::size_t i) {
    const Task& task = tasks[i];
    ScanRow& row = result.rows[i];
    row.inv_h = config.inv_h_grid[task.grid];
    row.delta = config.delta_list[task.delta];
    row.trial = task.trial;
    const double h = 1.0 / row.inv_h;
    const auto start = std::chrono::steady_clock::now();
    try {
      const OperatorMatrix a = assemble_dh(spec, {h, config.beta, 0.0}, basis);
      SpectrumResult s;
      if (row.delta == 0.0) {
        s = eigenvalues(a);
      } else {
        row.seed = derive_seed(config.root_seed, {task.grid, task.delta, static_cast<std::uint64_t>(task.trial)});
        const MultiplierMatrix mult = build_multiplier(spec, cutoff, basis, h);
        ++draws;
        s = eigenvalues(perturbed(a, mult, row.delta, row.seed));
      }
      row.count_in_disk = count_in_disk(s, config.disk_center, config.disk_radius);
      row.min_abs_eig = min_distance(s, 0.0);
    } catch (const std::exception& e) {
      row.count_in_disk.reset();
      row.min_abs_eig = std::numeric_limits<double>::quiet_NaN();
      row.error = e.what();
    }
    row.wall_ms = config.record_timing ? elapsed_ms(start) : 0.0;
  });

  result.gaussian_draws = draws.load();
  result.total_wall_seconds = elapsed_ms(total_start) / 1000.0;
  return result;
}

SpikeReport detect_spikes(const std::vector<double>& series, int window, double threshold) {
  if (window < 1) throw std::invalid_argument("detect_spikes: window must be at least 1");
  SpikeReport r;
  r.series = series;
  const std::size_t n = series.size();
  const std::size_t half = static_cast<std::size_t>(window / 2);
  r.median.resize(n);
  r.ratio.resize(n);
  std::vector<double> buf;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    buf.assign(series.begin() + static_cast<long>(lo), series.begin() + static_cast<long>(hi));
    std::sort(buf.begin(), buf.end());
    const std::size_t m = buf.size();
    r.median[i] = m % 2 == 1 ? buf[m / 2] : 0.5 * (buf[m / 2 - 1] + buf[m / 2]);
    r.ratio[i] = series[i] / std::max(r.median[i], 1.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? r.ratio[i - 1] : -std::numeric_limits<double>::infinity();
    const double right = i + 1 < n ? r.ratio[i + 1] : -std::numeric_limits<double>::infinity();
    const bool peak = r.ratio[i] >= left && r.ratio[i] >= right && (r.ratio[i] > left || r.ratio[i] > right);
    if (peak && r.ratio[i] > threshold) r.flagged.push_back(i);
  }
  return r;
}

std::vector<DeltaSummary> summarize_scan(const ScanConfig& config, const ScanResult& result) {
  const std::size_t ng = config.inv_h_grid.size();
  std::vector<DeltaSummary> out;
  for (double delta : config.delta_list) {
    DeltaSummary s;
    s.delta = delta;
    s.threshold = delta == 0.0 ? config.spike_ratio : config.washout_ratio;
    std::vector<double> sum(ng, 0.0);
    std::vector<int> seen(ng, 0);
    for (const ScanRow& row : result.rows) {
      if (row.delta != delta) continue;
      const auto g = static_cast<std::size_t>(
          std::lower_bound(config.inv_h_grid.begin(), config.inv_h_grid.end(), row.inv_h) - config.inv_h_grid.begin());
      if (!row.count_in_disk) {
        ++s.failed_rows;
        continue;
      }
      sum[g] += static_cast<double>(*row.count_in_disk);
      ++seen[g];
    }
    std::vector<double> series(ng);
    for (std::size_t g = 0; g < ng; ++g) series[g] = seen[g] > 0 ? sum[g] / seen[g] : 0.0;
    s.spikes = detect_spikes(series, config.median_window, s.threshold);
    for (std::size_t idx : s.spikes.flagged) {
      const double x = config.inv_h_grid[idx];
      s.flagged_inv_h.push_back(x);
      for (int m = 0; m < 2; ++m) {
        if (std::abs(x - kMagicInvH[m]) <= kMagicWindow) s.near_magic[m] = true;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

void WashoutConfig::validate() const {
  if (!(inv_h > 0.0)) throw std::invalid_argument("washout: inv_h must be positive");
  if (K < 0) throw std::invalid_argument("washout: K must be nonnegative");
  if (n_eigs < 1) throw std::invalid_argument("washout: n_eigs must be at least 1");
  if (delta_list.empty()) throw std::invalid_argument("washout: delta_list is empty");
  for (double d : delta_list) {
    if (!(d >= 0.0)) throw std::invalid_argument("washout: deltas must be nonnegative");
  }
  if (radius && !(*radius >= 0.0)) throw std::invalid_argument("washout: radius must be nonnegative");
  if (cutoff) cutoff->validate();
}

double central_radius(const LatticeSpec& spec, double h) {
  // The shortest nonzero dual vectors are the generators themselves.
  return 0.5 * h * std::min(std::abs(spec.dual_gens[0]), std::abs(spec.dual_gens[1]));
}

WashoutResult washout_experiment(const WashoutConfig& config) {
  config.validate();
  const LatticeSpec spec = make_lattice();
  const TruncationBasis basis(config.K);
  const double h = 1.0 / config.inv_h;
  const CutoffSpec cutoff = config.cutoff ? *config.cutoff : default_cutoff(spec, config.beta);
  const OperatorMatrix a = assemble_dh(spec, {h, config.beta, 0.0}, basis);
  const MultiplierMatrix mult = build_multiplier(spec, cutoff, basis, h);

  WashoutResult out;
  out.radius = config.radius ? *config.radius : central_radius(spec, h);
  out.dim = a.dim();
  out.panels.resize(config.delta_list.size());

  parallel_for(config.delta_list.size(), config.threads, [&](std::size_t d) {
    WashoutPanel& p = out.panels[d];
    p.delta = config.delta_list[d];
    try {
      SpectrumResult s;
      if (p.delta == 0.0) {
        s = eigenvalues(a);
      } else {
        p.seed = derive_seed(config.root_seed, {d});
        s = eigenvalues(perturbed(a, mult, p.delta, p.seed));
      }
      p.count_in_radius = count_in_disk(s, 0.0, out.radius);
      std::vector<cplx> ev = s.eigenvalues;
      std::stable_sort(ev.begin(), ev.end(), [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
      ev.resize(std::min(ev.size(), static_cast<std::size_t>(config.n_eigs)));
      p.smallest = std::move(ev);
    } catch (const std::exception& e) {
      p.error = e.what();
    }
  });
  return out;
}

}  // namespace fredlab
