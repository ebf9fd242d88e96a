#include "fredlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fredlab {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_scan_csv(std::ostream& out, const ScanResult& result) {
  out << "inv_h,delta,trial,seed,count_in_disk,min_abs_eig,wall_ms\n";
  for (const ScanRow& r : result.rows) {
    out << format_real(r.inv_h) << ',' << format_real(r.delta) << ',' << r.trial << ',' << r.seed << ',';
    if (r.count_in_disk) out << *r.count_in_disk;
    out << ',' << (r.count_in_disk ? format_real(r.min_abs_eig) : "nan") << ',' << format_real(r.wall_ms) << '\n';
  }
}

std::string scan_csv(const ScanResult& result) {
  std::ostringstream os;
  write_scan_csv(os, result);
  return os.str();
}

Json scan_summary_json(const ScanConfig& config, const ScanResult& result, const std::vector<DeltaSummary>& summary) {
  Json deltas = Json::array();
  for (const DeltaSummary& s : summary) {
    deltas.push_back({{"delta", s.delta},
                      {"threshold", s.threshold},
                      {"flagged_inv_h", s.flagged_inv_h},
                      {"near_magic", {s.near_magic[0], s.near_magic[1]}},
                      {"max_ratio", s.spikes.ratio.empty()
                                        ? 0.0
                                        : *std::max_element(s.spikes.ratio.begin(), s.spikes.ratio.end())},
                      {"failed_rows", s.failed_rows}});
  }
  Json errors = Json::array();
  for (const ScanRow& r : result.rows) {
    if (!r.error.empty()) errors.push_back({{"inv_h", r.inv_h}, {"delta", r.delta}, {"trial", r.trial}, {"error", r.error}});
  }
  return {{"config", scan_config_to_json(config)},
          {"magic_inv_h", {kMagicInvH[0], kMagicInvH[1]}},
          {"magic_window", kMagicWindow},
          {"rows", result.rows.size()},
          {"gaussian_draws", result.gaussian_draws},
          {"total_wall_seconds", result.total_wall_seconds},
          {"deltas", deltas},
          {"errors", errors}};
}

void write_washout_csv(std::ostream& out, const WashoutResult& result) {
  out << "delta,seed,rank,re,im,abs\n";
  for (const WashoutPanel& p : result.panels) {
    for (std::size_t i = 0; i < p.smallest.size(); ++i) {
      const cplx z = p.smallest[i];
      out << format_real(p.delta) << ',' << p.seed << ',' << i << ',' << format_real(z.real()) << ','
          << format_real(z.imag()) << ',' << format_real(std::abs(z)) << '\n';
    }
  }
}

Json washout_summary_json(const WashoutConfig& config, const WashoutResult& result) {
  Json panels = Json::array();
  for (const WashoutPanel& p : result.panels) {
    Json j = {{"delta", p.delta}, {"seed", p.seed}, {"count_in_radius", p.count_in_radius}};
    if (!p.error.empty()) j["error"] = p.error;
    panels.push_back(j);
  }
  Json cfg = {{"inv_h", config.inv_h},   {"beta", complex_to_json(config.beta)}, {"K", config.K},
              {"delta_list", config.delta_list}, {"n_eigs", config.n_eigs},  {"root_seed", config.root_seed}};
  if (config.cutoff) cfg["cutoff"] = cutoff_to_json(*config.cutoff);
  return {{"config", cfg}, {"radius", result.radius}, {"dim", result.dim}, {"panels", panels}};
}

void write_tail_csv(std::ostream& out, const TailEstimate& t) {
  const bool with_bound = !t.bound.empty();
  const bool with_regime = !t.in_regime.empty();
  out << "threshold,hits,probability,wilson_lo,wilson_hi";
  if (with_bound) out << ",bound";
  if (with_regime) out << ",in_regime";
  out << '\n';
  for (std::size_t i = 0; i < t.thresholds.size(); ++i) {
    out << format_real(t.thresholds[i]) << ',' << t.hits[i] << ',' << format_real(t.empirical_probability[i]) << ','
        << format_real(t.wilson_ci[i].first) << ',' << format_real(t.wilson_ci[i].second);
    if (with_bound) out << ',' << format_real(t.bound[i]);
    if (with_regime) out << ',' << (t.in_regime[i] ? "true" : "false");
    out << '\n';
  }
}

Json tail_json(const TailEstimate& t) {
  Json lo = Json::array(), hi = Json::array();
  for (const auto& [a, b] : t.wilson_ci) {
    lo.push_back(a);
    hi.push_back(b);
  }
  Json j = {{"kind", t.kind == TailKind::cdf ? "cdf" : "survival"},
            {"n_trials", t.n_trials},
            {"thresholds", t.thresholds},
            {"hits", t.hits},
            {"empirical_probability", t.empirical_probability},
            {"wilson_lo", lo},
            {"wilson_hi", hi},
            {"monotone", t.monotone()}};
  if (!t.bound.empty()) j["bound"] = t.bound;
  if (!t.in_regime.empty()) j["in_regime"] = t.in_regime;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Roughly five round ticks spanning [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(v);
  return t;
}

}  // namespace

std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  const double left = 70, right = 20, top = 40, bottom = 55;
  const double w = spec.width, h = spec.height;
  const double pw = w - left - right, ph = h - top - bottom;

  auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.log_x || x > 0) && (!spec.log_y || y > 0);
  };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 <= x0) x0 -= 0.5, x1 += 0.5;
  if (y1 <= y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.04 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return top + ph - (v - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(spec.title)
     << "</text>\n";
  os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
     << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (double t : linear_ticks(x0, x1)) {
    os << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(px(t)) << "\" y2=\""
       << num(top + ph + 5) << "\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << num(px(t)) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">"
       << tick_label(spec.log_x ? std::pow(10.0, t) : t) << "</text>\n";
  }
  for (double t : linear_ticks(y0, y1)) {
    os << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(left) << "\" y2=\""
       << num(py(t)) << "\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << num(left - 8) << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\">"
       << tick_label(spec.log_y ? std::pow(10.0, t) : t) << "</text>\n";
  }
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(h - 12) << "\" text-anchor=\"middle\">"
     << xml_escape(spec.x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
     << xml_escape(spec.y_label) << "</text>\n";

  for (double m : spec.x_markers) {
    if (spec.log_x && m <= 0) continue;
    const double v = tx(m);
    if (v < x0 || v > x1) continue;
    os << "<line x1=\"" << num(px(v)) << "\" y1=\"" << num(top) << "\" x2=\"" << num(px(v)) << "\" y2=\""
       << num(top + ph) << "\" stroke=\"#999\" stroke-dasharray=\"4,3\"/>\n";
  }

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const std::string colour = xml_escape(s.colour);
    if (s.points) {
      for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
        if (!usable(s.x[i], s.y[i])) continue;
        os << "<circle cx=\"" << num(px(tx(s.x[i]))) << "\" cy=\"" << num(py(ty(s.y[i]))) << "\" r=\"1.8\" fill=\""
           << colour << "\"/>\n";
      }
    } else {
      os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
        if (!usable(s.x[i], s.y[i])) continue;
        os << num(px(tx(s.x[i]))) << ',' << num(py(ty(s.y[i]))) << ' ';
      }
      os << "\"/>\n";
    }
    const double ly = top + 14 + 16 * static_cast<double>(k);
    os << "<rect x=\"" << num(left + pw - 150) << "\" y=\"" << num(ly - 9) << "\" width=\"10\" height=\"10\" fill=\""
       << colour << "\"/>\n";
    os << "<text x=\"" << num(left + pw - 135) << "\" y=\"" << num(ly) << "\">" << xml_escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace fredlab
