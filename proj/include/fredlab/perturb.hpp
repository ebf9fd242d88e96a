#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <initializer_list>

#include "fredlab/lattice.hpp"
#include "fredlab/models.hpp"

namespace fredlab {

enum class CutoffProfile { hard_indicator, smooth_bump };

/// Radial cutoff chi(|zeta|): 1 on [0, plateau], 0 on [support, inf).
/// hard_indicator drops to 0 right after the plateau and allows
/// plateau == support; smooth_bump needs plateau < support.
struct CutoffSpec {
  double plateau_radius = 1.0;
  double support_radius = 2.0;
  CutoffProfile profile = CutoffProfile::hard_indicator;

  void validate() const;
  double operator()(double r) const;
};

/// Constants behind the default cutoff: C bounds |conj(zeta) U(z) +
/// zeta conj(U(-z))|^2 <= C |zeta|^2, C2 > sqrt(27 C)/2 and C1 = 3.
struct CutoffConstants {
  double max_abs_u = 0.0;
  double c = 0.0;
  double c1 = 3.0;
  double c2 = 0.0;
};

/// Samples |U(z)| + |U(-z)| on a grid_n x grid_n grid over the cell.
CutoffConstants cutoff_constants(const LatticeSpec& spec, cplx beta, int grid_n = 256);

/// plateau = sqrt(C1 C2), support = sqrt(3) plateau, hard_indicator profile.
CutoffSpec default_cutoff(const LatticeSpec& spec, cplx beta);

/// diag(chi(h|k|)) on each of the two components, stored as reals.
struct MultiplierMatrix {
  Eigen::VectorXd diag;
  double h = 1.0;
  CutoffSpec cutoff;

  Eigen::Index dim() const { return diag.size(); }
  static MultiplierMatrix identity(Eigen::Index dim);
  static MultiplierMatrix constant(Eigen::Index dim, double value);
};

MultiplierMatrix build_multiplier(const LatticeSpec& spec, const CutoffSpec& cutoff, const TruncationBasis& basis,
                                  double h);

/// i.i.d. complex Gaussians with Re, Im ~ N(0, 1/2), filled column-major from
/// an mt19937_64 seeded with `seed`.
CMatrix sample_gaussian(Eigen::Index dim, std::uint64_t seed);

struct PerturbationDraw {
  CMatrix gaussian;
  double delta = 0.0;
  std::uint64_t seed = 0;
  CMatrix q_matrix;  // diag(s1) G diag(s2); callers scale by delta
  Eigen::VectorXd s1;
  Eigen::VectorXd s2;
};

PerturbationDraw assemble_q(const MultiplierMatrix& s1, const CMatrix& g, const MultiplierMatrix& s2, double delta,
                            std::uint64_t seed = 0);

struct MultiplierNorms {
  double op = 0.0;
  double hs = 0.0;
  double trace = 0.0;
};

MultiplierNorms operator_norms(const MultiplierMatrix& m);

enum class Side { left, right };

struct SubspaceConditioning {
  double alpha = 0.0;
  int n_small = 0;
  double cs_lower = 0.0;
  /// False when no singular value falls below the threshold; cs_lower is
  /// then +inf and the hypothesis places no constraint on the multiplier.
  bool constrained = true;
};

/// C_S = smallest singular value of S V, where the columns of V span the
/// singular vectors of A - z0 whose squared singular values are <= alpha
/// (left vectors for Side::left, right vectors for Side::right).
SubspaceConditioning estimate_cs(const CMatrix& a, cplx z0, double alpha, const MultiplierMatrix& s, Side side);

/// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Seed for a task at the given coordinates, independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> coords);

}  // namespace fredlab
