// Command-line front end: scans, washout panels, Grushin checks, tail
// estimates, bound evaluation and the FFT oracle comparison.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "fredlab/bounds.hpp"
#include "fredlab/config.hpp"
#include "fredlab/parallel.hpp"
#include "fredlab/report.hpp"
#include "fredlab/scan.hpp"
#include "fredlab/tails.hpp"
#include "fredlab/verify.hpp"

using namespace fredlab;

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> threads;
  std::string out = "fredlab-out";
  std::string format = "csv";
  bool plot = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "root seed (overrides the config)");
  cmd->add_option("--threads", o.threads, "worker threads: n or auto (default: THREADS, then auto)");
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_option("--format", o.format, "table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_flag("--plot", o.plot, "also write an SVG plot");
}

Json load_or_empty(const CommonOptions& o) { return o.config.empty() ? Json::object() : load_json_file(o.config); }

int threads_for(const CommonOptions& o, const Json& cfg) {
  if (o.threads) return parse_threads(*o.threads);
  if (cfg.contains("threads")) return parse_threads_json(cfg.at("threads"));
  return resolve_threads(std::nullopt);
}

std::uint64_t seed_for(const CommonOptions& o, const Json& cfg) {
  if (o.seed) return *o.seed;
  return cfg.value("root_seed", std::uint64_t{0});
}

std::string path_in(const CommonOptions& o, const std::string& name) { return o.out + "/" + name; }

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

// ---------------------------------------------------------------- scan

int run_scan(const CommonOptions& o, bool timing) {
  const Json cfg = load_or_empty(o);
  ScanConfig c = parse_scan_config(cfg);
  c.root_seed = seed_for(o, cfg);
  c.threads = threads_for(o, cfg);
  c.record_timing = c.record_timing || timing;

  const ScanResult result = magic_scan(c);
  const auto summary = summarize_scan(c, result);
  Json js = scan_summary_json(c, result, summary);

  if (o.format == "csv") {
    write_file(path_in(o, "scan.csv"), scan_csv(result));
    write_file(path_in(o, "scan_summary.json"), js.dump(2) + "\n");
  } else {
    Json rows = Json::array();
    for (const ScanRow& r : result.rows) {
      rows.push_back({{"inv_h", r.inv_h},
                      {"delta", r.delta},
                      {"trial", r.trial},
                      {"seed", r.seed},
                      {"count_in_disk", r.count_in_disk ? Json(*r.count_in_disk) : Json(nullptr)},
                      {"min_abs_eig", r.count_in_disk ? Json(r.min_abs_eig) : Json(nullptr)},
                      {"wall_ms", r.wall_ms}});
    }
    js["table"] = rows;
    write_file(path_in(o, "scan.json"), js.dump(2) + "\n");
  }

  if (o.plot) {
    std::vector<PlotSeries> series;
    for (std::size_t i = 0; i < summary.size(); ++i) {
      series.push_back({"delta = " + format_real(summary[i].delta), c.inv_h_grid, summary[i].spikes.series, false,
                        kPalette[i % 6]});
    }
    PlotSpec spec{"Eigenvalues in |z - c| <= r against 1/h", "1/h", "count", false, false, {}, 720, 440};
    spec.x_markers = {kMagicInvH[0], kMagicInvH[1]};
    write_file(path_in(o, "scan.svg"), render_svg(spec, series));
  }

  std::cout << "scan: " << result.rows.size() << " rows, " << result.gaussian_draws << " Gaussian draws, "
            << format_real(result.total_wall_seconds) << " s\n";
  for (const auto& s : summary) {
    std::cout << "  delta " << format_real(s.delta) << ": " << s.flagged_inv_h.size() << " spike(s)";
    for (double x : s.flagged_inv_h) std::cout << ' ' << format_real(x);
    if (s.failed_rows) std::cout << " (" << s.failed_rows << " failed rows)";
    std::cout << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- washout

int run_washout(const CommonOptions& o, bool showcase) {
  const Json cfg = load_or_empty(o);
  WashoutConfig c = parse_washout_config(cfg);
  c.root_seed = seed_for(o, cfg);
  c.threads = threads_for(o, cfg);
  if (showcase) {
    c.K = 40;
    c.n_eigs = 600;
    std::cerr << "warning: --showcase builds 13122 x 13122 dense matrices (about 2.7 GB each) and runs a full "
                 "eigendecomposition per delta; expect hours of CPU time\n";
  }
  const WashoutResult r = washout_experiment(c);
  Json js = washout_summary_json(c, r);

  if (o.format == "csv") {
    std::ostringstream os;
    write_washout_csv(os, r);
    write_file(path_in(o, "washout.csv"), os.str());
    write_file(path_in(o, "washout_summary.json"), js.dump(2) + "\n");
  } else {
    for (std::size_t i = 0; i < r.panels.size(); ++i) {
      Json ev = Json::array();
      for (cplx z : r.panels[i].smallest) ev.push_back(complex_to_json(z));
      js["panels"][i]["eigenvalues"] = ev;
    }
    write_file(path_in(o, "washout.json"), js.dump(2) + "\n");
  }

  if (o.plot) {
    std::vector<PlotSeries> series;
    for (std::size_t i = 0; i < r.panels.size(); ++i) {
      PlotSeries s{"delta = " + format_real(r.panels[i].delta), {}, {}, true, kPalette[i % 6]};
      for (cplx z : r.panels[i].smallest) {
        s.x.push_back(z.real());
        s.y.push_back(z.imag());
      }
      series.push_back(std::move(s));
    }
    PlotSpec spec{"Eigenvalues of least modulus", "Re", "Im", false, false, {}, 720, 560};
    write_file(path_in(o, "washout.svg"), render_svg(spec, series));
  }

  std::cout << "washout: dim " << r.dim << ", radius " << format_real(r.radius) << '\n';
  for (const auto& p : r.panels) {
    std::cout << "  delta " << format_real(p.delta) << ": " << p.count_in_radius << " in radius";
    if (!p.error.empty()) std::cout << " (error: " << p.error << ")";
    std::cout << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- grushin-verify

GrushinVerifyConfig parse_grushin_config(const Json& cfg) {
  reject_unknown_keys(cfg,
                      {"op", "K", "inv_h", "beta", "dim", "z0", "alpha", "epsilon0", "delta", "draws", "slope_deltas",
                       "root_seed", "threads", "cutoff"},
                      "grushin-verify config");
  GrushinVerifyConfig c;
  c.op = cfg.value("op", c.op);
  c.K = cfg.value("K", c.K);
  c.inv_h = cfg.value("inv_h", c.inv_h);
  if (cfg.contains("beta")) c.beta = parse_complex(cfg.at("beta"));
  c.dim = cfg.value("dim", c.dim);
  if (cfg.contains("z0")) c.z0 = parse_complex(cfg.at("z0"));
  if (cfg.contains("alpha")) {
    if (cfg.at("alpha").is_null()) {
      c.alpha.reset();
    } else {
      c.alpha = cfg.at("alpha").get<double>();
    }
  }
  c.epsilon0 = cfg.value("epsilon0", c.epsilon0);
  c.delta = cfg.value("delta", c.delta);
  c.draws = cfg.value("draws", c.draws);
  if (cfg.contains("slope_deltas")) c.slope_deltas = cfg.at("slope_deltas").get<std::vector<double>>();
  if (cfg.contains("cutoff")) c.cutoff = parse_cutoff(cfg.at("cutoff"));
  return c;
}

int run_grushin(const CommonOptions& o, const std::optional<std::string>& op) {
  const Json cfg = load_or_empty(o);
  GrushinVerifyConfig c = parse_grushin_config(cfg);
  if (op) c.op = *op;
  c.root_seed = seed_for(o, cfg);
  c.threads = threads_for(o, cfg);
  const GrushinVerifyReport r = grushin_verify(c);

  double cmin = INFINITY, cmax = 0.0;
  for (const auto& d : r.draws) {
    if (std::isfinite(d.constant)) {
      cmin = std::min(cmin, d.constant);
      cmax = std::max(cmax, d.constant);
    }
  }
  Json js = {{"operator", c.op},
             {"dim", r.dim},
             {"alpha", r.alpha},
             {"n_small", r.n_small},
             {"epsilon0", c.epsilon0},
             {"delta", c.delta},
             {"right_identity_residual", r.residuals.right_identity},
             {"left_identity_residual", r.residuals.left_identity},
             {"norm_e0", r.residuals.norm_e0},
             {"norm_e_plus0", r.residuals.norm_e_plus0},
             {"norm_e_minus0", r.residuals.norm_e_minus0},
             {"norm_e_mp0", r.residuals.norm_e_mp0},
             {"max_pairing_residual", r.residuals.max_pairing},
             {"max_orthonormality_residual", r.residuals.max_orthonormal},
             {"exact", r.exact},
             {"norm_table", r.norm_table},
             {"draws", r.draws.size()},
             {"neumann_valid_rate", r.valid_rate},
             {"schur_consistency_rate", r.consistency_rate},
             {"max_reconstruction_error", r.max_reconstruction_error},
             {"schur_constant_min", std::isfinite(cmin) ? Json(cmin) : Json(nullptr)},
             {"schur_constant_max", cmax},
             {"remainder_slope", {{"deltas", r.slope.deltas}, {"gaps", r.slope.gaps}, {"slope", r.slope.slope},
                                  {"neumann_valid", r.slope.valid}}}};

  std::ostringstream os;
  os << "draw,seed,valid,singular,first_order_gap,remainder_norm,reconstruction_error,sigma_min_full,"
        "sigma_min_effective,constant,consistent\n";
  for (const auto& d : r.draws) {
    os << d.draw << ',' << d.seed << ',' << d.valid << ',' << d.singular << ',' << format_real(d.first_order_gap) << ','
       << format_real(d.remainder_norm) << ',' << format_real(d.reconstruction_error) << ','
       << format_real(d.sigma_min_full) << ',' << format_real(d.sigma_min_effective) << ','
       << format_real(d.constant) << ',' << d.consistent << '\n';
  }
  if (o.format == "csv") {
    write_file(path_in(o, "grushin.csv"), os.str());
    write_file(path_in(o, "grushin_summary.json"), js.dump(2) + "\n");
  } else {
    write_file(path_in(o, "grushin.json"), js.dump(2) + "\n");
  }
  if (o.plot && !r.slope.gaps.empty()) {
    PlotSpec spec{"Second-order remainder", "delta", "gap", true, true, {}, 640, 420};
    write_file(path_in(o, "grushin.svg"),
               render_svg(spec, {{"|E-+(delta) - first order|", r.slope.deltas, r.slope.gaps, false, kPalette[0]}}));
  }

  std::cout << "grushin-verify (" << c.op << ", dim " << r.dim << ", N " << r.n_small << "): identity residual "
            << format_real(std::max(r.residuals.right_identity, r.residuals.left_identity)) << ", norm table "
            << (r.norm_table ? "ok" : "FAILED") << ", schur consistency " << format_real(r.consistency_rate)
            << ", remainder slope " << format_real(r.slope.slope) << '\n';
  return r.exact && r.norm_table && r.consistency_rate == 1.0 ? 0 : 1;
}

// ---------------------------------------------------------------- tails

void write_tail(const CommonOptions& o, const std::string& stem, const TailEstimate& t, Json extra, bool log_axes) {
  Json js = tail_json(t);
  for (auto& [k, v] : extra.items()) js[k] = v;
  if (o.format == "csv") {
    std::ostringstream os;
    write_tail_csv(os, t);
    write_file(path_in(o, stem + ".csv"), os.str());
    write_file(path_in(o, stem + "_summary.json"), js.dump(2) + "\n");
  } else {
    write_file(path_in(o, stem + ".json"), js.dump(2) + "\n");
  }
  if (o.plot) {
    std::vector<PlotSeries> series{{"empirical", t.thresholds, t.empirical_probability, false, kPalette[0]}};
    if (!t.bound.empty()) series.push_back({"bound", t.thresholds, t.bound, false, kPalette[1]});
    PlotSpec spec{stem, "threshold", "probability", log_axes, true, {}, 640, 420};
    write_file(path_in(o, stem + ".svg"), render_svg(spec, series));
  }
}

int run_tail_hs(const CommonOptions& o) {
  const Json cfg = load_or_empty(o);
  reject_unknown_keys(cfg, {"dim", "n_trials", "thresholds", "c0", "root_seed", "threads"}, "tails hs config");
  HsTailConfig c;
  const int dim = cfg.value("dim", 100);
  if (dim < 1) throw std::invalid_argument("tails hs: dim must be positive");
  c.s1 = Eigen::VectorXd::Ones(dim);
  c.s2 = c.s1;
  c.n_trials = cfg.value("n_trials", std::size_t{2000});
  c.c0 = cfg.value("c0", c.c0);
  c.root_seed = seed_for(o, cfg);
  c.threads = threads_for(o, cfg);
  // Sum of dim^2 unit exponentials: mean dim^2, standard deviation dim.
  const double mean = static_cast<double>(dim) * dim;
  if (cfg.contains("thresholds")) {
    c.thresholds = cfg.at("thresholds").get<std::vector<double>>();
  } else {
    for (int j = 0; j <= 24; ++j) c.thresholds.push_back(mean + 0.25 * j * dim);
  }
  const TailEstimate t = hs_norm_tail(c);
  const DecayCheck d = decay_beyond(t, mean);
  write_tail(o, "tail_hs", t,
             {{"dim", dim}, {"c0", c.c0}, {"mean", mean},
              {"decay", {{"slope", d.slope}, {"last_excess", d.last_excess}, {"points", d.points}, {"ok", d.ok}}}},
             false);
  std::cout << "tails hs: log-survival slope " << format_real(d.slope) << " beyond the mean over " << d.points
            << " points, " << (d.ok ? "at least linear decay" : "decay check FAILED") << '\n';
  return 0;
}

int run_tail_det(const CommonOptions& o) {
  const Json cfg = load_or_empty(o);
  reject_unknown_keys(cfg,
                      {"n", "n_trials", "thresholds", "d_scale", "auto_quantile", "decades", "per_decade",
                       "root_seed", "threads"},
                      "tails det config");
  DetTailConfig c;
  const int n = cfg.value("n", 20);
  if (n < 1) throw std::invalid_argument("tails det: n must be positive");
  c.d_matrix = cfg.value("d_scale", 0.0) * CMatrix::Identity(n, n);
  c.n_trials = cfg.value("n_trials", std::size_t{5000});
  if (cfg.contains("thresholds")) c.thresholds = cfg.at("thresholds").get<std::vector<double>>();
  c.auto_quantile = cfg.value("auto_quantile", c.auto_quantile);
  c.decades = cfg.value("decades", c.decades);
  c.per_decade = cfg.value("per_decade", c.per_decade);
  c.root_seed = seed_for(o, cfg);
  c.threads = threads_for(o, cfg);
  const TailEstimate t = det_tail(c);
  const RatioCheck rc = ratio_over_threshold(t, c.decades);
  const DecadeFit f = fit_smallest_decade(t);
  write_tail(o, "tail_det", t,
             {{"n", n},
              {"ratio", {{"top", rc.top_ratio}, {"max", rc.max_ratio}, {"points", rc.points}, {"bounded", rc.bounded}}},
              {"smallest_decade", {{"lo", f.lo}, {"slope", f.slope}, {"points", f.points}, {"ok", f.ok}}}},
             true);
  std::cout << "tails det: P(|det| <= c)/c max " << format_real(rc.max_ratio) << " vs top "
            << format_real(rc.top_ratio) << (rc.bounded ? " (bounded)" : " (NOT bounded)") << ", smallest-decade slope "
            << format_real(f.slope) << '\n';
  return 0;
}

int run_tail_singular(const CommonOptions& o) {
  const Json cfg = load_or_empty(o);
  reject_unknown_keys(cfg,
                      {"op", "K", "inv_h", "beta", "dim", "z0", "alpha", "delta", "n_trials", "thresholds",
                       "auto_quantile", "decades", "per_decade", "c2", "root_seed", "threads", "cutoff"},
                      "tails smallest-singular config");
  GrushinVerifyConfig oc;
  oc.op = cfg.value("op", std::string("seeley"));
  oc.K = cfg.value("K", 8);
  oc.inv_h = cfg.value("inv_h", oc.inv_h);
  if (cfg.contains("beta")) oc.beta = parse_complex(cfg.at("beta"));
  oc.dim = cfg.value("dim", oc.dim);
  oc.root_seed = seed_for(o, cfg);
  if (cfg.contains("cutoff")) oc.cutoff = parse_cutoff(cfg.at("cutoff"));
  const VerifyOperator op = build_verify_operator(oc);

  SingularTailConfig c;
  c.a = op.a;
  c.s1 = op.s1;
  c.s2 = op.s2;
  if (cfg.contains("z0")) c.z0 = parse_complex(cfg.at("z0"));
  c.alpha = cfg.value("alpha", 0.5);
  c.delta = cfg.value("delta", c.delta);
  c.n_trials = cfg.value("n_trials", std::size_t{2000});
  if (cfg.contains("thresholds")) c.thresholds = cfg.at("thresholds").get<std::vector<double>>();
  c.auto_quantile = cfg.value("auto_quantile", c.auto_quantile);
  c.decades = cfg.value("decades", c.decades);
  c.per_decade = cfg.value("per_decade", c.per_decade);
  c.c2 = cfg.value("c2", c.c2);
  c.root_seed = oc.root_seed;
  c.threads = threads_for(o, cfg);

  const TailEstimate t = smallest_singular_tail(c);
  const DecadeFit f = fit_smallest_decade(t);
  const SingularRegime reg = singular_regime(c.a, c.z0, c.alpha, c.delta, c.c2);
  write_tail(o, "tail_smallest_singular", t,
             {{"operator", oc.op},
              {"alpha", c.alpha},
              {"delta", c.delta},
              {"c2", c.c2},
              {"n_small", reg.n_small},
              {"regime_max_threshold", reg.max_threshold},
              {"smallest_decade", {{"lo", f.lo}, {"slope", f.slope}, {"points", f.points}, {"ok", f.ok}}}},
             true);
  std::cout << "tails smallest-singular (" << oc.op << "): monotone " << (t.monotone() ? "yes" : "NO")
            << ", smallest-decade slope " << format_real(f.slope) << ", regime bound " << format_real(reg.max_threshold)
            << " (N = " << reg.n_small << ")\n";
  return 0;
}

// ---------------------------------------------------------------- bounds

int run_bounds(const CommonOptions& o) {
  const Json cfg = load_or_empty(o);
  reject_unknown_keys(cfg, {"c0", "c1", "c2", "kappa", "alpha", "inv_h", "delta", "h_values", "beta", "cutoff"},
                      "bounds config");
  Json pj = Json::object();
  for (const char* k : {"c0", "c1", "c2", "kappa", "alpha"}) {
    if (cfg.contains(k)) pj[k] = cfg.at(k);
  }
  const BoundParams p = parse_bound_params(pj);
  const LatticeSpec spec = make_lattice();
  const cplx beta = cfg.contains("beta") ? parse_complex(cfg.at("beta")) : cplx{1.0, 0.0};
  const CutoffSpec cut = cfg.contains("cutoff") ? parse_cutoff(cfg.at("cutoff")) : default_cutoff(spec, beta);
  const double inv_h = cfg.value("inv_h", 1.0);
  const double delta = cfg.value("delta", 1e-3);
  const std::vector<double> hs =
      cfg.contains("h_values") ? cfg.at("h_values").get<std::vector<double>>() : std::vector<double>{0.1, 0.14, 0.2, 0.28};

  const MultiplierNorms norms = tbg_multiplier_norms(spec, cut, 1.0 / inv_h);
  const GeneralBound g = evaluate_general_bound(p, norms, norms, p.alpha, delta);
  Json rows = Json::array();
  std::ostringstream os;
  os << "h,delta,trace_norm,hs_norm,exponent,general_probability,tbg_probability\n";
  for (double h : hs) {
    const TbgBound b = evaluate_tbg_bound(p, spec, cut, h);
    rows.push_back({{"h", h},
                    {"delta", b.delta},
                    {"trace_norm", b.norms.trace},
                    {"hs_norm", b.norms.hs},
                    {"exponent", b.general.exponent},
                    {"general_probability", b.general.probability},
                    {"tbg_probability", b.probability}});
    os << format_real(h) << ',' << format_real(b.delta) << ',' << format_real(b.norms.trace) << ','
       << format_real(b.norms.hs) << ',' << format_real(b.general.exponent) << ','
       << format_real(b.general.probability) << ',' << format_real(b.probability) << '\n';
  }
  const ExponentScaling sc = exponent_scaling(p, spec, cut, hs);
  Json js = {{"params", bound_params_to_json(p)},
             {"cutoff", cutoff_to_json(cut)},
             {"at", {{"inv_h", inv_h}, {"delta", delta}, {"op_norm", norms.op}, {"hs_norm", norms.hs},
                     {"trace_norm", norms.trace}, {"exponent", g.exponent}, {"probability", g.probability},
                     {"nontrivial_delta", std::isfinite(g.nontrivial_delta) ? Json(g.nontrivial_delta) : Json("inf")}}},
             {"tbg", rows},
             {"exponent_slope", sc.slope},
             {"expected_slope", -2.0 * p.kappa}};
  if (o.format == "csv") {
    write_file(path_in(o, "bounds.csv"), os.str());
    write_file(path_in(o, "bounds_summary.json"), js.dump(2) + "\n");
  } else {
    write_file(path_in(o, "bounds.json"), js.dump(2) + "\n");
  }
  if (o.plot) {
    std::vector<double> mag;
    for (double e : sc.exponent) mag.push_back(std::abs(e));
    PlotSpec ps{"|exponent| at delta = h^kappa", "h", "|exponent|", true, true, {}, 640, 420};
    write_file(path_in(o, "bounds.svg"), render_svg(ps, {{"|exponent|", sc.h, mag, false, kPalette[0]}}));
  }
  std::cout << "bounds: probability " << format_real(g.probability) << " at 1/h = " << format_real(inv_h)
            << ", delta = " << format_real(delta) << "; nontrivial below delta = " << format_real(g.nontrivial_delta)
            << "; exponent slope " << format_real(sc.slope) << " (expected " << format_real(-2.0 * p.kappa) << ")\n";
  return 0;
}

// ---------------------------------------------------------------- oracle-check

int run_oracle(const CommonOptions& o) {
  const Json cfg = load_or_empty(o);
  reject_unknown_keys(cfg, {"K_list", "vectors", "h", "beta", "grid_n", "root_seed"}, "oracle-check config");
  const auto ks = cfg.contains("K_list") ? cfg.at("K_list").get<std::vector<int>>() : std::vector<int>{3, 5, 8};
  const int vectors = cfg.value("vectors", 20);
  const double h = cfg.value("h", 1.0);
  const cplx beta = cfg.contains("beta") ? parse_complex(cfg.at("beta")) : cplx{1.0, 0.0};
  const int grid = cfg.value("grid_n", 0);
  const std::uint64_t seed = seed_for(o, cfg);

  bool ok = true;
  Json rows = Json::array();
  std::ostringstream os;
  os << "K,grid,vectors,max_relative_error\n";
  for (int K : ks) {
    const OracleCheck r = oracle_check(K, vectors, seed, h, beta, grid);
    ok = ok && r.max_relative_error <= 1e-10;
    os << r.K << ',' << r.grid << ',' << r.vectors << ',' << format_real(r.max_relative_error) << '\n';
    rows.push_back({{"K", r.K}, {"grid", r.grid}, {"vectors", r.vectors}, {"max_relative_error", r.max_relative_error}});
    std::cout << "oracle-check K=" << r.K << " grid=" << r.grid << ": max relative error "
              << format_real(r.max_relative_error) << '\n';
  }
  if (o.format == "csv") {
    write_file(path_in(o, "oracle.csv"), os.str());
  } else {
    write_file(path_in(o, "oracle.json"), Json{{"checks", rows}, {"tolerance", 1e-10}, {"ok", ok}}.dump(2) + "\n");
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fredlab: truncated Fredholm operators under random perturbation"};
  app.require_subcommand(1);

  CommonOptions scan_o, wash_o, grushin_o, hs_o, det_o, sing_o, bounds_o, oracle_o;
  bool timing = false;
  bool showcase = false;
  std::optional<std::string> grushin_op;

  auto* scan = app.add_subcommand("scan", "count eigenvalues in a disk along a 1/h grid");
  add_common(scan, scan_o);
  scan->add_flag("--timing", timing, "record per-row wall time (breaks byte-identical reruns)");

  auto* wash = app.add_subcommand("washout", "eigenvalues of least modulus with and without perturbation");
  add_common(wash, wash_o);
  wash->add_flag("--showcase", showcase, "K = 40, 600 eigenvalues (very slow)");

  auto* grushin = app.add_subcommand("grushin-verify", "check the bordered inverse, Neumann expansion and Schur bound");
  add_common(grushin, grushin_o);
  grushin->add_option("--operator", grushin_op, "tbg, seeley or random")
      ->check(CLI::IsMember({"tbg", "seeley", "random"}));

  auto* tails = app.add_subcommand("tails", "Monte Carlo tail estimates");
  tails->require_subcommand(1);
  auto* hs = tails->add_subcommand("hs", "survival of the squared Hilbert-Schmidt norm");
  add_common(hs, hs_o);
  auto* det = tails->add_subcommand("det", "distribution of |det(D + G)| near zero");
  add_common(det, det_o);
  auto* sing = tails->add_subcommand("smallest-singular", "distribution of the smallest singular value");
  add_common(sing, sing_o);

  auto* bounds = app.add_subcommand("bounds", "evaluate the probability bounds with user constants");
  add_common(bounds, bounds_o);

  auto* oracle = app.add_subcommand("oracle-check", "assembled matrix against the FFT evaluation");
  add_common(oracle, oracle_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*scan) return run_scan(scan_o, timing);
    if (*wash) return run_washout(wash_o, showcase);
    if (*grushin) return run_grushin(grushin_o, grushin_op);
    if (*hs) return run_tail_hs(hs_o);
    if (*det) return run_tail_det(det_o);
    if (*sing) return run_tail_singular(sing_o);
    if (*bounds) return run_bounds(bounds_o);
    if (*oracle) return run_oracle(oracle_o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
