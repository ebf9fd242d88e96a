#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace fredlab {

using cplx = std::complex<double>;

/// Moire lattice Gamma = 4*pi*(i*omega Z + i*omega^2 Z) and its dual
/// Gamma* = 3^{-1/2}(omega Z + omega^2 Z). Every constant is derived from
/// omega = exp(2 pi i / 3) inside make_lattice().
struct LatticeSpec {
  cplx omega;
  std::array<cplx, 2> gamma_gens;
  std::array<cplx, 2> dual_gens;
  double cell_volume = 0.0;
};

LatticeSpec make_lattice();

/// Coordinates of k = (m*omega + n*omega^2)/sqrt(3) in the dual basis.
struct DualIndex {
  int m = 0;
  int n = 0;

  friend bool operator==(const DualIndex&, const DualIndex&) = default;
  DualIndex operator+(const DualIndex& o) const { return {m + o.m, n + o.n}; }
  DualIndex operator-() const { return {-m, -n}; }
};

cplx dual_point(const LatticeSpec& spec, DualIndex idx);

/// Pairing gamma*conj(k) + conj(gamma)*k, which lies in 4*pi*Z for dual k.
double duality_pairing(cplx gamma, cplx k);

/// Box of dual modes |m|, |n| <= K, enumerated row-major (m outer, ascending).
class TruncationBasis {
 public:
  TruncationBasis() = default;
  explicit TruncationBasis(int half_width);

  int half_width() const { return half_width_; }
  std::size_t dim_scalar() const { return indices_.size(); }
  const std::vector<DualIndex>& indices() const { return indices_; }
  const DualIndex& operator[](std::size_t i) const { return indices_[i]; }

  bool contains(DualIndex idx) const;
  std::optional<std::size_t> index_of(DualIndex idx) const;

 private:
  int half_width_ = 0;
  std::vector<DualIndex> indices_;
};

TruncationBasis enumerate_basis(const LatticeSpec& spec, int half_width);

/// Shift kappa_j = i*omega^j in dual coordinates together with the weight
/// omega^j that multiplication by U(z) attaches to it.
struct PotentialShift {
  DualIndex shift;
  cplx coefficient;
};

/// U(z) e_k = sum_j omega^j e_{k + kappa_j}; U(-z) uses -kappa_j with the
/// same weights.
std::array<PotentialShift, 3> potential_shifts(const LatticeSpec& spec);

}  // namespace fredlab
