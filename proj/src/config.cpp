#include "fredlab/config.hpp"

#include <fstream>
#include <stdexcept>

#include "fredlab/parallel.hpp"

namespace fredlab {

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error("config file '" + path + "': " + e.what());
  }
}

void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> allowed, std::string_view context) {
  if (!obj.is_object()) throw std::invalid_argument(std::string(context) + ": expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw std::invalid_argument(std::string(context) + ": unknown key '" + key + "'");
  }
}

cplx parse_complex(const Json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw std::invalid_argument("expected a number or [re, im], got " + v.dump());
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

CutoffSpec parse_cutoff(const Json& obj) {
  reject_unknown_keys(obj, {"plateau_radius", "support_radius", "profile"}, "cutoff");
  CutoffSpec c;
  c.plateau_radius = obj.at("plateau_radius").get<double>();
  c.support_radius = obj.value("support_radius", c.plateau_radius);
  const std::string profile = obj.value("profile", std::string("hard_indicator"));
  if (profile == "hard_indicator") {
    c.profile = CutoffProfile::hard_indicator;
  } else if (profile == "smooth_bump") {
    c.profile = CutoffProfile::smooth_bump;
  } else {
    throw std::invalid_argument("cutoff: unknown profile '" + profile + "'");
  }
  c.validate();
  return c;
}

Json cutoff_to_json(const CutoffSpec& c) {
  return {{"plateau_radius", c.plateau_radius},
          {"support_radius", c.support_radius},
          {"profile", c.profile == CutoffProfile::hard_indicator ? "hard_indicator" : "smooth_bump"}};
}

int parse_threads_json(const Json& v) {
  if (v.is_string()) return parse_threads(v.get<std::string>());
  if (v.is_number_integer() && v.get<long>() >= 1) return v.get<int>();
  throw std::invalid_argument("threads must be a positive integer or \"auto\", got " + v.dump());
}

ScanConfig parse_scan_config(const Json& obj) {
  reject_unknown_keys(obj,
                      {"inv_h_grid", "inv_h_range", "beta", "K", "disk_center", "disk_radius", "delta_list",
                       "trials_per_point", "root_seed", "threads", "cutoff", "median_window", "spike_ratio",
                       "washout_ratio", "record_timing"},
                      "scan config");
  ScanConfig c;
  if (obj.contains("inv_h_grid") && obj.contains("inv_h_range")) {
    throw std::invalid_argument("scan config: give inv_h_grid or inv_h_range, not both");
  }
  c.inv_h_grid = make_grid(0.4, 2.5, 0.02);
  if (obj.contains("inv_h_grid")) c.inv_h_grid = obj.at("inv_h_grid").get<std::vector<double>>();
  if (obj.contains("inv_h_range")) {
    const auto r = obj.at("inv_h_range").get<std::vector<double>>();
    if (r.size() != 3) throw std::invalid_argument("scan config: inv_h_range is [start, stop, step]");
    c.inv_h_grid = make_grid(r[0], r[1], r[2]);
  }
  if (obj.contains("beta")) c.beta = parse_complex(obj.at("beta"));
  c.K = obj.value("K", c.K);
  if (obj.contains("disk_center")) c.disk_center = parse_complex(obj.at("disk_center"));
  c.disk_radius = obj.value("disk_radius", c.disk_radius);
  if (obj.contains("delta_list")) c.delta_list = obj.at("delta_list").get<std::vector<double>>();
  c.trials_per_point = obj.value("trials_per_point", c.trials_per_point);
  c.root_seed = obj.value("root_seed", c.root_seed);
  if (obj.contains("threads")) c.threads = parse_threads_json(obj.at("threads"));
  if (obj.contains("cutoff")) c.cutoff = parse_cutoff(obj.at("cutoff"));
  c.median_window = obj.value("median_window", c.median_window);
  c.spike_ratio = obj.value("spike_ratio", c.spike_ratio);
  c.washout_ratio = obj.value("washout_ratio", c.washout_ratio);
  c.record_timing = obj.value("record_timing", c.record_timing);
  c.validate();
  return c;
}

Json scan_config_to_json(const ScanConfig& c) {
  Json j = {{"inv_h_grid", c.inv_h_grid},
            {"beta", complex_to_json(c.beta)},
            {"K", c.K},
            {"disk_center", complex_to_json(c.disk_center)},
            {"disk_radius", c.disk_radius},
            {"delta_list", c.delta_list},
            {"trials_per_point", c.trials_per_point},
            {"root_seed", c.root_seed},
            {"median_window", c.median_window},
            {"spike_ratio", c.spike_ratio},
            {"washout_ratio", c.washout_ratio}};
  if (c.cutoff) j["cutoff"] = cutoff_to_json(*c.cutoff);
  return j;
}

WashoutConfig parse_washout_config(const Json& obj) {
  reject_unknown_keys(obj,
                      {"inv_h", "beta", "K", "delta_list", "n_eigs", "root_seed", "threads", "cutoff", "radius"},
                      "washout config");
  WashoutConfig c;
  c.inv_h = obj.value("inv_h", c.inv_h);
  if (obj.contains("beta")) c.beta = parse_complex(obj.at("beta"));
  c.K = obj.value("K", c.K);
  if (obj.contains("delta_list")) c.delta_list = obj.at("delta_list").get<std::vector<double>>();
  c.n_eigs = obj.value("n_eigs", c.n_eigs);
  c.root_seed = obj.value("root_seed", c.root_seed);
  if (obj.contains("threads")) c.threads = parse_threads_json(obj.at("threads"));
  if (obj.contains("cutoff")) c.cutoff = parse_cutoff(obj.at("cutoff"));
  if (obj.contains("radius")) c.radius = obj.at("radius").get<double>();
  c.validate();
  return c;
}

BoundParams parse_bound_params(const Json& obj) {
  reject_unknown_keys(obj, {"c0", "c1", "c2", "kappa", "alpha"}, "bound params");
  BoundParams p;
  p.c0 = obj.value("c0", p.c0);
  p.c1 = obj.value("c1", p.c1);
  p.c2 = obj.value("c2", p.c2);
  p.kappa = obj.value("kappa", p.kappa);
  p.alpha = obj.value("alpha", p.alpha);
  p.validate(false);
  return p;
}

Json bound_params_to_json(const BoundParams& p) {
  return {{"c0", p.c0}, {"c1", p.c1}, {"c2", p.c2}, {"kappa", p.kappa}, {"alpha", p.alpha}};
}

}  // namespace fredlab
