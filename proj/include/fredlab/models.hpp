#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <map>
#include <string>

#include "fredlab/lattice.hpp"

namespace fredlab {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct ChiralModelParams {
  double h = 1.0;
  cplx beta{1.0, 0.0};
  cplx z_shift{0.0, 0.0};
};

enum class BlockKind { scalar, two_by_two };

/// Dense truncation of an operator. For chiral models the layout is
/// [component 1 modes | component 2 modes], each block of size block_size.
struct OperatorMatrix {
  CMatrix entries;
  BlockKind block_kind = BlockKind::scalar;
  std::size_t block_size = 0;
  std::string basis_ref;

  Eigen::Index dim() const { return entries.rows(); }
  bool all_finite() const;
};

/// Fourier coefficients indexed by integer frequency.
using FourierSeries = std::map<int, cplx>;

struct SeeleyParams {
  FourierSeries a_coeffs;
  FourierSeries b_coeffs;
  int K = 1;
};

/// U(z) = beta * sum_j omega^j exp((z conj(omega^j) - conj(z) omega^j)/2).
cplx potential_value(const LatticeSpec& spec, cplx z, cplx beta = {1.0, 0.0});

/// Matrix of D_h(beta) - z0 on the box truncation:
/// [[h k - z0, beta U+], [beta U-, h k - z0]].
OperatorMatrix assemble_dh(const LatticeSpec& spec, const ChiralModelParams& params,
                           const TruncationBasis& basis);

/// Formal adjoint built from the conjugated symbols (h conj(k) - conj(z0) on
/// the diagonal, conj(beta U(-+z)) off the diagonal). Equals the conjugate
/// transpose of assemble_dh on the truncation.
OperatorMatrix assemble_dh_adjoint(const LatticeSpec& spec, const ChiralModelParams& params,
                                   const TruncationBasis& basis);

/// Same action as assemble_dh(...) * coeffs, computed pseudospectrally:
/// coefficients are synthesised on a grid_n x grid_n grid over the
/// fundamental cell, multiplied pointwise by beta U(+-z), analysed again and
/// projected back onto the box. grid_n = 0 picks 4K + 4.
CVector apply_dh_gridded(const LatticeSpec& spec, const ChiralModelParams& params,
                         const TruncationBasis& basis, const CVector& coeffs, int grid_n = 0);

/// Smallest grid size for which the degree-one potential shifts do not alias
/// back into the box.
int min_alias_free_grid(int half_width);

/// Galerkin matrix of f -> a f' + b f on e^{inx}, |n| <= K:
/// entry(m, n) = a_{m-n} i n + b_{m-n}.
OperatorMatrix assemble_seeley(const SeeleyParams& params);

}  // namespace fredlab
