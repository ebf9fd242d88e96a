#pragma once

#include <Eigen/Dense>

#include "fredlab/models.hpp"
#include "fredlab/perturb.hpp"

namespace fredlab {

/// Bordered problem for A - z0 built from its singular value decomposition.
/// Singular values are stored ascending; column i of e_frame / f_frame is the
/// matching right / left singular vector, so (A - z0) e_i = t_i f_i.
struct GrushinProblem {
  cplx z0{};
  double alpha = 0.0;
  double epsilon0 = 0.5;
  int n_small = 0;
  Eigen::VectorXd t;
  CMatrix e_frame;
  CMatrix f_frame;
  CMatrix r_minus;  // dim x N, columns f_1..f_N
  CMatrix r_plus;   // N x dim, rows e_i^*

  Eigen::Index dim() const { return t.size(); }
  /// [[A - z0, R-], [R+, 0]]
  CMatrix bordered(const CMatrix& a) const;
};

struct GrushinInverse {
  CMatrix e0;        // sum over the tail of t_i^-1 e_i f_i^*
  CMatrix e_plus0;   // dim x N
  CMatrix e_minus0;  // N x dim
  CMatrix e_mp0;     // -diag(t_1..t_N)

  CMatrix block() const;
};

/// ‖PE - I‖ and ‖EP - I‖ (operator norm) plus the four block norms.
struct GrushinResiduals {
  double right_identity = 0.0;
  double left_identity = 0.0;
  double norm_e0 = 0.0;
  double norm_e_plus0 = 0.0;
  double norm_e_minus0 = 0.0;
  double norm_e_mp0 = 0.0;
  double max_pairing = 0.0;      // max_i of both pairing residuals
  double max_orthonormal = 0.0;  // max of ‖E*E - I‖, ‖F*F - I‖ entrywise

  /// Norm table with additive slack: ‖E0‖ <= alpha^-1/2, ‖E±0‖ = 1 (or 0
  /// without a border), ‖E-+0‖ <= sqrt(alpha).
  bool norm_table_holds(double alpha, int n_small, double slack) const;
};

struct GrushinSystem {
  GrushinProblem problem;
  GrushinInverse inverse;
};

/// Small singular values are those with t^2 <= alpha (ties count as small).
/// Throws std::invalid_argument for alpha <= 0, epsilon0 outside (0, 1), or
/// when every singular value is small.
GrushinSystem build_grushin(const CMatrix& a, cplx z0, double alpha, double epsilon0);
inline GrushinSystem build_grushin(const OperatorMatrix& a, cplx z0, double alpha, double epsilon0) {
  return build_grushin(a.entries, z0, alpha, epsilon0);
}

GrushinResiduals verify_grushin(const GrushinSystem& g, const CMatrix& a);

struct NeumannDecomposition {
  CMatrix e_mp_delta;   // lower-right block of the directly inverted bordered matrix
  CMatrix first_order;  // E-+0 - delta E-0 Q E+0
  CMatrix tail;         // T: e_mp_delta = E-+0 + delta (-E-0 Q E+0 + T)
  CMatrix tail_series;  // T summed term by term from the series, empty when invalid
  double remainder_norm = 0.0;  // ‖T‖_HS
  double first_order_gap = 0.0; // ‖e_mp_delta - first_order‖ (operator norm)
  double q_norm = 0.0;
  double q_hs_norm = 0.0;
  bool valid = false;
  bool singular = false;  // bordered matrix numerically singular

  // Remaining blocks of the perturbed inverse, used by the Schur comparison.
  CMatrix e_delta;
  CMatrix e_plus_delta;
  CMatrix e_minus_delta;

  // Singular values of E-0 S1 and S2 E+0 (ascending); empty when the draw
  // carries no multipliers.
  Eigen::VectorXd t1_factor;
  Eigen::VectorXd t2_factor;
};

/// Inverts the bordered matrix of A + delta Q - z0 directly. The Neumann
/// condition is delta alpha^-1/2 ‖Q‖ < 1 - epsilon0.
NeumannDecomposition perturbed_effective(const GrushinSystem& g, const CMatrix& a, const PerturbationDraw& q,
                                         double delta);

struct SchurComparison {
  double sigma_min_full = 0.0;
  double sigma_min_effective = 0.0;
  double constant = 0.0;
  bool consistent = false;
};

/// Compares t_1(A + delta Q - z0) with t_1(E-+^delta). The constant is
/// sqrt(alpha) (t_1(E-+) ‖E‖ + ‖E-‖ ‖E+‖), evaluated on this draw. Without a
/// border the effective value is +inf and the constant is NaN.
SchurComparison schur_check(const GrushinSystem& g, const CMatrix& a, const PerturbationDraw& q, double delta);
SchurComparison schur_check(const GrushinSystem& g, const CMatrix& a, const PerturbationDraw& q, double delta,
                            const NeumannDecomposition& nd);

inline constexpr double kSchurZeroTolerance = 1e-12;

struct ReducedProfiles {
  Eigen::VectorXd profile_1;  // singular values of E-0 S1, ascending
  Eigen::VectorXd profile_2;  // singular values of S2 E+0, ascending
  double cs_lower = 0.0;      // min over both sides of the subspace conditioning
  double upper = 0.0;         // max(‖S1‖, ‖S2‖)
  bool bracket_holds = false;
  CMatrix reduced_gaussian;   // E-0 S1 G S2 E+0
};

ReducedProfiles reduced_profiles(const GrushinSystem& g, const CMatrix& a, const MultiplierMatrix& s1,
                                 const MultiplierMatrix& s2, const CMatrix& gaussian, double slack = 1e-10);

}  // namespace fredlab
