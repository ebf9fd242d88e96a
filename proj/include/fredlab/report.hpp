#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "fredlab/config.hpp"
#include "fredlab/scan.hpp"
#include "fredlab/tails.hpp"

namespace fredlab {

/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_real(double x);

/// Header inv_h,delta,trial,seed,count_in_disk,min_abs_eig,wall_ms. A failed
/// row leaves count_in_disk empty and writes nan for min_abs_eig.
void write_scan_csv(std::ostream& out, const ScanResult& result);
std::string scan_csv(const ScanResult& result);

Json scan_summary_json(const ScanConfig& config, const ScanResult& result, const std::vector<DeltaSummary>& summary);

/// delta,seed,rank,re,im,abs
void write_washout_csv(std::ostream& out, const WashoutResult& result);
Json washout_summary_json(const WashoutConfig& config, const WashoutResult& result);

/// threshold,hits,probability,wilson_lo,wilson_hi[,bound][,in_regime]
void write_tail_csv(std::ostream& out, const TailEstimate& t);
Json tail_json(const TailEstimate& t);

/// Writes bytes as given (binary mode, so LF stays LF). Creates parent
/// directories.
void write_file(const std::string& path, const std::string& content);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool points = false;  // scatter instead of a polyline
  std::string colour = "#1f77b4";
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<double> x_markers;  // dashed vertical guides
  int width = 720;
  int height = 440;
};

/// Standalone SVG with axes, ticks, a legend and the given series.
std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace fredlab
