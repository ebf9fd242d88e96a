#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"

#include "fredlab/bounds.hpp"
#include "fredlab/scan.hpp"

namespace fredlab {

using Json = nlohmann::json;

/// Reads a JSON object from disk; throws std::runtime_error with the path on
/// open or parse failure.
Json load_json_file(const std::string& path);

/// Throws std::invalid_argument naming the first key not in `allowed`.
void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> allowed, std::string_view context);

/// A number, or a two-element array [re, im].
cplx parse_complex(const Json& v);
Json complex_to_json(cplx z);

/// {"plateau_radius", "support_radius", "profile": "hard_indicator" | "smooth_bump"}
CutoffSpec parse_cutoff(const Json& obj);
Json cutoff_to_json(const CutoffSpec& c);

/// Keys mirror the ScanConfig fields. "inv_h_range": [start, stop, step] may
/// stand in for "inv_h_grid"; with neither, 1/h runs over 0.4 to 2.5 in
/// steps of 0.02. "threads" is an integer or "auto".
ScanConfig parse_scan_config(const Json& obj);
Json scan_config_to_json(const ScanConfig& c);

WashoutConfig parse_washout_config(const Json& obj);

BoundParams parse_bound_params(const Json& obj);
Json bound_params_to_json(const BoundParams& p);

/// Accepts an integer >= 1 or the string "auto".
int parse_threads_json(const Json& v);

}  // namespace fredlab
