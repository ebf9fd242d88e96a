#include "fredlab/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fredlab {

LatticeSpec make_lattice() {
  using std::numbers::pi;
  LatticeSpec spec;
  spec.omega = std::polar(1.0, 2.0 * pi / 3.0);
  const cplx w = spec.omega;
  const cplx w2 = w * w;
  const cplx i{0.0, 1.0};
  spec.gamma_gens = {4.0 * pi * i * w, 4.0 * pi * i * w2};
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  spec.dual_gens = {w * inv_sqrt3, w2 * inv_sqrt3};
  spec.cell_volume = std::abs(std::imag(spec.gamma_gens[0] * std::conj(spec.gamma_gens[1])));
  return spec;
}

cplx dual_point(const LatticeSpec& spec, DualIndex idx) {
  return static_cast<double>(idx.m) * spec.dual_gens[0] + static_cast<double>(idx.n) * spec.dual_gens[1];
}

double duality_pairing(cplx gamma, cplx k) {
  return std::real(gamma * std::conj(k) + std::conj(gamma) * k);
}

TruncationBasis::TruncationBasis(int half_width) : half_width_(half_width) {
  if (half_width < 0) {
    throw std::invalid_argument("truncation half-width must be nonnegative, got " + std::to_string(half_width));
  }
  const int side = 2 * half_width + 1;
  indices_.reserve(static_cast<std::size_t>(side) * static_cast<std::size_t>(side));
  for (int m = -half_width; m <= half_width; ++m) {
    for (int n = -half_width; n <= half_width; ++n) {
      indices_.push_back({m, n});
    }
  }
}

bool TruncationBasis::contains(DualIndex idx) const {
  return std::abs(idx.m) <= half_width_ && std::abs(idx.n) <= half_width_;
}

std::optional<std::size_t> TruncationBasis::index_of(DualIndex idx) const {
  if (!contains(idx)) return std::nullopt;
  const std::size_t side = 2 * static_cast<std::size_t>(half_width_) + 1;
  return static_cast<std::size_t>(idx.m + half_width_) * side + static_cast<std::size_t>(idx.n + half_width_);
}

TruncationBasis enumerate_basis(const LatticeSpec& /*spec*/, int half_width) {
  return TruncationBasis(half_width);
}

std::array<PotentialShift, 3> potential_shifts(const LatticeSpec& spec) {
  // i = (omega - omega^2)/sqrt(3), i*omega = (omega + 2 omega^2)/sqrt(3),
  // i*omega^2 = (-2 omega - omega^2)/sqrt(3).
  const cplx w = spec.omega;
  return {{{{1, -1}, cplx{1.0, 0.0}}, {{1, 2}, w}, {{-2, -1}, w * w}}};
}

}  // namespace fredlab
