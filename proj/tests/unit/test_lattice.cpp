#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fredlab/lattice.hpp"

using namespace fredlab;
using std::numbers::pi;

namespace {
cplx ek(cplx k, cplx z) { return std::exp(cplx{0.0, 1.0} * std::real(z * std::conj(k))); }
}  // namespace

TEST_CASE("generators come from the cube root of unity") {
  const auto spec = make_lattice();
  const cplx w{-0.5, std::sqrt(3.0) / 2.0};
  CHECK(std::abs(spec.omega - w) < 1e-15);
  CHECK(std::abs(std::pow(spec.omega, 3) - 1.0) < 1e-14);
  CHECK(std::abs(spec.gamma_gens[0] - 4.0 * pi * cplx{0, 1} * w) < 1e-13);
  CHECK(std::abs(spec.gamma_gens[1] - 4.0 * pi * cplx{0, 1} * w * w) < 1e-13);
  CHECK(std::abs(spec.dual_gens[0] - w / std::sqrt(3.0)) < 1e-15);
  CHECK(std::abs(spec.dual_gens[1] - w * w / std::sqrt(3.0)) < 1e-15);
  // |gamma|^2 sin(120 degrees) with |gamma| = 4 pi.
  CHECK(spec.cell_volume == doctest::Approx(16.0 * pi * pi * std::sqrt(3.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("dual points pair with lattice points into 4 pi Z") {
  const auto spec = make_lattice();
  for (int a = -3; a <= 3; ++a) {
    for (int b = -3; b <= 3; ++b) {
      const cplx gamma = static_cast<double>(a) * spec.gamma_gens[0] + static_cast<double>(b) * spec.gamma_gens[1];
      for (int m = -4; m <= 4; ++m) {
        for (int n = -4; n <= 4; ++n) {
          const double p = duality_pairing(gamma, dual_point(spec, {m, n})) / (4.0 * pi);
          CHECK(std::abs(p - std::round(p)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("plane waves are periodic") {
  const auto spec = make_lattice();
  const cplx z{0.37, -1.21};
  for (int m = -3; m <= 3; ++m) {
    for (int n = -3; n <= 3; ++n) {
      const cplx k = dual_point(spec, {m, n});
      CHECK(std::abs(ek(k, z + spec.gamma_gens[0]) - ek(k, z)) < 1e-11);
      CHECK(std::abs(ek(k, z - 2.0 * spec.gamma_gens[1]) - ek(k, z)) < 1e-11);
    }
  }
}

TEST_CASE("box basis") {
  const auto spec = make_lattice();
  for (int K : {0, 1, 4, 7}) {
    const auto basis = enumerate_basis(spec, K);
    CHECK(basis.dim_scalar() == static_cast<std::size_t>((2 * K + 1) * (2 * K + 1)));
    CHECK(basis.half_width() == K);
    for (std::size_t i = 0; i < basis.dim_scalar(); ++i) {
      const auto idx = basis.index_of(basis[i]);
      REQUIRE(idx.has_value());
      CHECK(*idx == i);
    }
    CHECK_FALSE(basis.contains({K + 1, 0}));
    CHECK_FALSE(basis.index_of({0, -K - 1}).has_value());
  }
  CHECK_THROWS_AS(TruncationBasis(-1), std::invalid_argument);
}

TEST_CASE("potential shifts are i omega^j with weight omega^j") {
  const auto spec = make_lattice();
  const auto shifts = potential_shifts(spec);
  cplx wj{1.0, 0.0};
  for (const auto& s : shifts) {
    CHECK(std::abs(dual_point(spec, s.shift) - cplx{0.0, 1.0} * wj) < 1e-14);
    CHECK(std::abs(s.coefficient - wj) < 1e-14);
    CHECK(dual_point(spec, -s.shift) == -dual_point(spec, s.shift));
    wj *= spec.omega;
  }
}
