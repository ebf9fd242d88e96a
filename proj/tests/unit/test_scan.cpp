#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fredlab/report.hpp"
#include "fredlab/scan.hpp"

using namespace fredlab;

namespace {
ScanConfig small_config() {
  ScanConfig c;
  c.inv_h_grid = make_grid(0.5, 0.8, 0.05);
  c.K = 2;
  c.delta_list = {0.0, 0.1, 1e-3};
  c.trials_per_point = 3;
  c.root_seed = 11;
  return c;
}
}  // namespace

TEST_CASE("grid construction") {
  const auto g = make_grid(0.4, 2.5, 0.02);
  CHECK(g.size() == 106);
  CHECK(g.front() == 0.4);
  CHECK(g.back() == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(make_grid(1.0, 1.0, 0.1).size() == 1);
  CHECK_THROWS_AS(make_grid(1.0, 0.0, 0.1), std::invalid_argument);
}

TEST_CASE("config validation") {
  ScanConfig c = small_config();
  CHECK_NOTHROW(c.validate());
  c.inv_h_grid = {0.5, 0.5};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.inv_h_grid.clear();
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.trials_per_point = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.delta_list = {-1.0};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("row layout, seeds and the unperturbed branch") {
  const ScanConfig c = small_config();
  const ScanResult r = magic_scan(c);
  const std::size_t grid = c.inv_h_grid.size();
  CHECK(r.rows.size() == grid * (1 + (c.delta_list.size() - 1) * c.trials_per_point));
  CHECK(r.gaussian_draws == grid * (c.delta_list.size() - 1) * c.trials_per_point);
  for (const auto& row : r.rows) {
    REQUIRE(row.count_in_disk.has_value());
    CHECK(row.wall_ms == 0.0);
    if (row.delta == 0.0) {
      CHECK(row.trial == 0);
      CHECK(row.seed == 0);
    } else {
      CHECK(row.seed != 0);
    }
  }
  CHECK(r.rows[0].delta == 0.0);
  CHECK(r.rows[1].delta == 0.1);
  CHECK(r.rows[1].trial == 0);
  CHECK(r.rows[3].trial == 2);

  ScanConfig only_zero = c;
  only_zero.delta_list = {0.0};
  CHECK(magic_scan(only_zero).gaussian_draws == 0);
}

TEST_CASE("output does not depend on the thread count") {
  ScanConfig c = small_config();
  c.threads = 1;
  const std::string one = scan_csv(magic_scan(c));
  c.threads = 3;
  const std::string three = scan_csv(magic_scan(c));
  CHECK(one == three);
  c.root_seed = 12;
  CHECK(scan_csv(magic_scan(c)) != one);
}

TEST_CASE("beta = 0 scan counts lattice points") {
  ScanConfig c;
  c.inv_h_grid = {0.5, 1.0, 2.0};
  c.beta = 0.0;
  c.K = 4;
  const auto spec = make_lattice();
  const TruncationBasis basis(4);
  const ScanResult r = magic_scan(c);
  for (const auto& row : r.rows) {
    std::size_t n = 0;
    for (const auto& k : basis.indices()) n += std::abs(dual_point(spec, k) / row.inv_h) <= c.disk_radius;
    CHECK(*row.count_in_disk == 2 * n);
  }
}

TEST_CASE("spike detection") {
  std::vector<double> s(30, 10.0);
  s[7] = 50.0;
  s[20] = 25.0;
  const auto r = detect_spikes(s, 11, 3.0);
  REQUIRE(r.flagged.size() == 1);
  CHECK(r.flagged[0] == 7);
  CHECK(r.median[7] == 10.0);
  CHECK(r.ratio[7] == 5.0);
  CHECK(detect_spikes(s, 11, 2.0).flagged.size() == 2);

  // A rising trend alone is detrended away.
  std::vector<double> ramp;
  for (int i = 0; i < 40; ++i) ramp.push_back(10.0 + 3.0 * i);
  CHECK(detect_spikes(ramp, 11, 1.5).flagged.empty());
  // Medians of zero are floored at one.
  std::vector<double> zeros(10, 0.0);
  zeros[5] = 2.0;
  CHECK(detect_spikes(zeros, 5, 1.5).flagged.size() == 1);
}

TEST_CASE("summary flags spikes near the expected values") {
  ScanConfig c;
  c.inv_h_grid = make_grid(0.4, 1.0, 0.02);
  c.delta_list = {0.0};
  ScanResult r;
  for (double x : c.inv_h_grid) {
    ScanRow row;
    row.inv_h = x;
    row.count_in_disk = std::abs(x - 0.58) < 1e-9 ? 200 : 20;
    r.rows.push_back(row);
  }
  const auto s = summarize_scan(c, r);
  REQUIRE(s.size() == 1);
  REQUIRE(s[0].flagged_inv_h.size() == 1);
  CHECK(s[0].flagged_inv_h[0] == doctest::Approx(0.58));
  CHECK(s[0].near_magic[0]);
  CHECK_FALSE(s[0].near_magic[1]);
}

TEST_CASE("washout panels") {
  const auto spec = make_lattice();
  CHECK(central_radius(spec, 2.0) == doctest::Approx(1.0 / std::sqrt(3.0)));
  WashoutConfig c;
  c.K = 3;
  c.n_eigs = 10;
  c.delta_list = {0.0, 1e-2};
  c.root_seed = 5;
  const auto r = washout_experiment(c);
  CHECK(r.dim == 98);
  REQUIRE(r.panels.size() == 2);
  CHECK(r.panels[0].seed == 0);
  CHECK(r.panels[1].seed != 0);
  for (const auto& p : r.panels) {
    CHECK(p.error.empty());
    REQUIRE(p.smallest.size() == 10);
    for (std::size_t i = 1; i < p.smallest.size(); ++i) CHECK(std::abs(p.smallest[i]) >= std::abs(p.smallest[i - 1]));
  }
  CHECK(r.radius == doctest::Approx(central_radius(spec, 1.0 / c.inv_h)));
  c.n_eigs = 0;
  CHECK_THROWS_AS(washout_experiment(c), std::invalid_argument);
}
