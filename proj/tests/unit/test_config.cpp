#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fredlab/config.hpp"

using namespace fredlab;

TEST_CASE("complex values") {
  CHECK(parse_complex(Json(2.5)) == cplx{2.5, 0.0});
  CHECK(parse_complex(Json::parse("[1, -2]")) == cplx{1.0, -2.0});
  CHECK_THROWS(parse_complex(Json::parse("[1, 2, 3]")));
  CHECK_THROWS(parse_complex(Json("x")));
  CHECK(parse_complex(complex_to_json({0.25, -3.0})) == cplx{0.25, -3.0});
}

TEST_CASE("scan configuration") {
  SUBCASE("defaults") {
    const ScanConfig c = parse_scan_config(Json::object());
    CHECK(c.inv_h_grid.size() == 106);
    CHECK(c.K == 7);
    CHECK(c.delta_list == std::vector<double>{0.0});
  }
  SUBCASE("every field") {
    const auto j = Json::parse(R"({
      "inv_h_range": [0.5, 0.7, 0.05], "beta": [1, 0], "K": 4, "disk_center": [0.1, 0.2],
      "disk_radius": 1.5, "delta_list": [0, 0.1], "trials_per_point": 3, "root_seed": 99,
      "threads": 2, "median_window": 7, "spike_ratio": 4, "washout_ratio": 2,
      "cutoff": {"plateau_radius": 1, "support_radius": 2, "profile": "smooth_bump"}})");
    const ScanConfig c = parse_scan_config(j);
    CHECK(c.inv_h_grid.size() == 5);
    CHECK(c.K == 4);
    CHECK(c.disk_center == cplx{0.1, 0.2});
    CHECK(c.trials_per_point == 3);
    CHECK(c.root_seed == 99);
    CHECK(c.threads == 2);
    CHECK(c.median_window == 7);
    REQUIRE(c.cutoff.has_value());
    CHECK(c.cutoff->profile == CutoffProfile::smooth_bump);
    // Round trip through the writer.
    const ScanConfig back = parse_scan_config(scan_config_to_json(c));
    CHECK(back.inv_h_grid == c.inv_h_grid);
    CHECK(back.delta_list == c.delta_list);
    CHECK(back.cutoff->support_radius == 2.0);
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(parse_scan_config(Json::parse(R"({"k": 3})")), std::invalid_argument);
    CHECK_THROWS(parse_scan_config(Json::parse(R"({"inv_h_grid": [1], "inv_h_range": [1, 2, 0.5]})")));
    CHECK_THROWS(parse_scan_config(Json::parse(R"({"threads": 0})")));
    CHECK_THROWS(parse_scan_config(Json::parse(R"({"cutoff": {"plateau_radius": 1, "bogus": 2}})")));
    CHECK_THROWS(parse_scan_config(Json::parse("[1, 2]")));
  }
}

TEST_CASE("threads") {
  CHECK(parse_threads_json(Json(3)) == 3);
  CHECK(parse_threads_json(Json("auto")) >= 1);
  CHECK_THROWS(parse_threads_json(Json(-1)));
  CHECK_THROWS(parse_threads_json(Json("many")));
}

TEST_CASE("washout and bound parameters") {
  const auto w = parse_washout_config(Json::parse(R"({"K": 5, "n_eigs": 20, "delta_list": [0, 1e-3]})"));
  CHECK(w.K == 5);
  CHECK(w.n_eigs == 20);
  CHECK(w.delta_list.size() == 2);
  CHECK_THROWS(parse_washout_config(Json::parse(R"({"rho": 1})")));

  const auto p = parse_bound_params(Json::parse(R"({"c0": 2, "kappa": 4})"));
  CHECK(p.c0 == 2.0);
  CHECK(p.kappa == 4.0);
  CHECK(p.c1 == 1.0);
  const auto back = parse_bound_params(bound_params_to_json(p));
  CHECK(back.kappa == 4.0);
  CHECK_THROWS(parse_bound_params(Json::parse(R"({"c3": 1})")));
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "fredlab_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "ok.json") << R"({"K": 2})";
    std::ofstream(dir / "bad.json") << "{";
  }
  CHECK(load_json_file((dir / "ok.json").string())["K"] == 2);
  CHECK_THROWS_AS(load_json_file((dir / "bad.json").string()), std::runtime_error);
  CHECK_THROWS_AS(load_json_file((dir / "missing.json").string()), std::runtime_error);
  std::filesystem::remove_all(dir);
}
