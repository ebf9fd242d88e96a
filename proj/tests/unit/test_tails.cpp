#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fredlab/spectral.hpp"
#include "fredlab/tails.hpp"

using namespace fredlab;

TEST_CASE("Wilson interval") {
  // Reference values from the closed form with z = 1.96.
  const auto a = wilson_interval(0, 10);
  CHECK(a.first == 0.0);
  CHECK(a.second == doctest::Approx(0.27753).epsilon(1e-4));
  const auto b = wilson_interval(5, 10);
  CHECK(b.first == doctest::Approx(0.23659).epsilon(1e-4));
  CHECK(b.second == doctest::Approx(0.76341).epsilon(1e-4));
  const auto c = wilson_interval(10, 10);
  CHECK(c.second == doctest::Approx(1.0));
  CHECK(c.first == doctest::Approx(0.72247).epsilon(1e-4));
}

TEST_CASE("counting conventions") {
  const auto cdf = tail_from_samples({1, 2, 2, 3, 5}, {0, 2, 4, 6}, TailKind::cdf);
  CHECK(cdf.hits == std::vector<std::size_t>{0, 3, 4, 5});
  CHECK(cdf.monotone());
  const auto sf = tail_from_samples({1, 2, 2, 3, 5}, {0, 2, 4, 6}, TailKind::survival);
  CHECK(sf.hits == std::vector<std::size_t>{5, 4, 1, 0});
  CHECK(sf.monotone());
  CHECK_THROWS_AS(tail_from_samples({1}, {2, 1}, TailKind::cdf), std::invalid_argument);
}

TEST_CASE("threshold helpers") {
  const auto t = log_thresholds(100.0, 2, 4);
  CHECK(t.size() == 9);
  CHECK(t.front() == doctest::Approx(1.0));
  CHECK(t.back() == 100.0);
  CHECK(sample_quantile({5, 1, 4, 2, 3}, 0.5) == 3.0);
  CHECK(sample_quantile({5, 1, 4, 2, 3}, 0.0) == 1.0);
  CHECK(sample_quantile({5, 1, 4, 2, 3}, 1.0) == 5.0);
}

TEST_CASE("Hilbert-Schmidt tail") {
  HsTailConfig c;
  c.s1 = Eigen::VectorXd::Ones(100);
  c.s2 = c.s1;
  c.n_trials = 1000;
  c.thresholds = {0.0, 1e4, 1e4 + 6 * 100};
  c.root_seed = 3;
  const auto t = hs_norm_tail(c);
  CHECK(t.empirical_probability[0] == 1.0);
  CHECK(t.empirical_probability[2] <= 0.01);
  CHECK(t.monotone());
  REQUIRE(t.bound.size() == 3);
  // Mean of a sum of 10^4 unit exponentials.
  double mean = 0.0;
  for (double s : t.samples) mean += s;
  CHECK(mean / t.n_trials == doctest::Approx(1e4).epsilon(0.005));
}

TEST_CASE("Hilbert-Schmidt tail decays at least linearly") {
  HsTailConfig c;
  c.s1 = Eigen::VectorXd::Ones(60);
  c.s2 = c.s1;
  c.n_trials = 3000;
  for (int j = 0; j <= 16; ++j) c.thresholds.push_back(3600.0 + 15.0 * j);
  c.root_seed = 8;
  const auto d = decay_beyond(hs_norm_tail(c), 3600.0);
  CHECK(d.points >= 5);
  CHECK(d.ok);
}

TEST_CASE("determinant of a single complex Gaussian") {
  DetTailConfig c;
  c.d_matrix = CMatrix::Zero(1, 1);
  c.n_trials = 20000;
  c.thresholds = {0.1, 0.3, 0.6, 1.0};
  c.root_seed = 9;
  const auto t = det_tail(c);
  for (std::size_t i = 0; i < t.thresholds.size(); ++i) {
    const double exact = 1.0 - std::exp(-t.thresholds[i] * t.thresholds[i]);
    CHECK(exact >= t.wilson_ci[i].first - 0.002);
    CHECK(exact <= t.wilson_ci[i].second + 0.002);
  }
  CHECK(t.monotone());
}

TEST_CASE("determinant law is unitarily invariant") {
  const CMatrix u = sample_gaussian(6, 1).householderQr().householderQ();
  for (std::uint64_t s = 0; s < 20; ++s) {
    const CMatrix g = sample_gaussian(6, s);
    CHECK(log_abs_det(u * g) == doctest::Approx(log_abs_det(g)).epsilon(1e-12));
  }
  DetTailConfig big;
  big.d_matrix = CMatrix::Zero(kMaxDetDimension + 1, kMaxDetDimension + 1);
  CHECK_THROWS_AS(det_tail(big), std::invalid_argument);
}

TEST_CASE("determinant tail at N = 20 is dominated by a linear law") {
  DetTailConfig c;
  c.d_matrix = CMatrix::Zero(20, 20);
  c.n_trials = 3000;
  c.root_seed = 4;
  const auto t = det_tail(c);
  CHECK(t.monotone());
  CHECK(ratio_over_threshold(t, 2).bounded);
}

TEST_CASE("smallest singular value tail") {
  CMatrix a = CMatrix::Zero(6, 6);
  a.diagonal() << 0.0, 0.0, 1.0, 2.0, 3.0, 4.0;
  SingularTailConfig c;
  c.a = a;
  c.s1 = MultiplierMatrix::identity(6);
  c.s2 = c.s1;
  c.alpha = 0.5;
  c.n_trials = 1500;
  c.root_seed = 2;

  SUBCASE("delta = 0 is deterministic") {
    c.delta = 0.0;
    c.thresholds = {0.5};
    const auto t = smallest_singular_tail(c);
    for (double s : t.samples) CHECK(s == 0.0);
    CHECK(t.empirical_probability[0] == 1.0);
  }
  SUBCASE("small thresholds, slope and saturation") {
    c.delta = 1e-3;
    const auto t = smallest_singular_tail(c);
    CHECK(t.monotone());
    const auto f = fit_smallest_decade(t);
    REQUIRE(f.ok);
    CHECK(f.slope >= 0.9);
    c.thresholds = {1e3};
    CHECK(smallest_singular_tail(c).empirical_probability[0] == 1.0);
  }
  SUBCASE("regime bound") {
    const auto r = singular_regime(a, 0.0, 0.5, 1e-3, 1.0);
    CHECK(r.n_small == 2);
    CHECK(r.max_threshold == doctest::Approx(4.0 * 1e-6));
  }
}
