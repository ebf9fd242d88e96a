#include "fredlab/grushin.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fredlab/spectral.hpp"

namespace fredlab {

namespace {

CMatrix shifted(const CMatrix& a, cplx z0) { return a - z0 * CMatrix::Identity(a.rows(), a.cols()); }

double op_norm(const CMatrix& m) { return m.size() == 0 ? 0.0 : operator_norm(m); }

Eigen::VectorXd ascending_values(const CMatrix& m) {
  if (m.size() == 0) return {};
  return singular_values(m).ascending();
}

}  // namespace

CMatrix GrushinProblem::bordered(const CMatrix& a) const {
  const Eigen::Index d = dim();
  const Eigen::Index n = n_small;
  CMatrix p = CMatrix::Zero(d + n, d + n);
  p.topLeftCorner(d, d) = shifted(a, z0);
  p.topRightCorner(d, n) = r_minus;
  p.bottomLeftCorner(n, d) = r_plus;
  return p;
}

CMatrix GrushinInverse::block() const {
  const Eigen::Index d = e0.rows();
  const Eigen::Index n = e_mp0.rows();
  CMatrix e(d + n, d + n);
  e.topLeftCorner(d, d) = e0;
  e.topRightCorner(d, n) = e_plus0;
  e.bottomLeftCorner(n, d) = e_minus0;
  e.bottomRightCorner(n, n) = e_mp0;
  return e;
}

bool GrushinResiduals::norm_table_holds(double alpha, int n_small, double slack) const {
  const double frame = n_small > 0 ? 1.0 : 0.0;
  return norm_e0 <= 1.0 / std::sqrt(alpha) + slack && std::abs(norm_e_plus0 - frame) <= slack &&
         std::abs(norm_e_minus0 - frame) <= slack && norm_e_mp0 <= std::sqrt(alpha) + slack;
}

GrushinSystem build_grushin(const CMatrix& a, cplx z0, double alpha, double epsilon0) {
  if (!(alpha > 0.0)) throw std::invalid_argument("build_grushin: alpha must be positive");
  if (!(epsilon0 > 0.0 && epsilon0 < 1.0)) throw std::invalid_argument("build_grushin: epsilon0 must lie in (0, 1)");
  if (a.rows() != a.cols() || a.rows() == 0) throw std::invalid_argument("build_grushin: need a nonempty square matrix");

  const auto svd = singular_values(shifted(a, z0), true);
  const Eigen::Index d = a.rows();

  GrushinSystem out;
  GrushinProblem& gp = out.problem;
  gp.z0 = z0;
  gp.alpha = alpha;
  gp.epsilon0 = epsilon0;
  // The decomposition returns t descending; flip to ascending. Its left and
  // right vectors already satisfy (A - z0) v_i = t_i u_i, which fixes the
  // phases the same way f_i = t_i^-1 (A - z0) e_i would, without the
  // cancellation that formula suffers for small t_i.
  gp.t = svd.values.reverse();
  gp.e_frame = svd.right_vectors->rowwise().reverse();
  gp.f_frame = svd.left_vectors->rowwise().reverse();

  int n = 0;
  while (n < d && gp.t(n) * gp.t(n) <= alpha) ++n;
  if (n == d) throw std::invalid_argument("alpha too large: no invertible tail");
  gp.n_small = n;

  // Exact zeros: any orthonormal basis of the cokernel will do. Re-orthonormalise
  // what the decomposition returned so the frame is clean to rounding.
  const double zero_cut = std::numeric_limits<double>::epsilon() * std::max(1.0, svd.largest());
  int n_zero = 0;
  while (n_zero < n && gp.t(n_zero) <= zero_cut) ++n_zero;
  if (n_zero > 0) {
    Eigen::HouseholderQR<CMatrix> qr(gp.f_frame.leftCols(n_zero));
    gp.f_frame.leftCols(n_zero) = qr.householderQ() * CMatrix::Identity(d, n_zero);
  }

  gp.r_minus = gp.f_frame.leftCols(n);
  gp.r_plus = gp.e_frame.leftCols(n).adjoint();

  GrushinInverse& gi = out.inverse;
  const Eigen::Index tail = d - n;
  const Eigen::VectorXd inv_t = gp.t.tail(tail).cwiseInverse();
  gi.e0 = gp.e_frame.rightCols(tail) * inv_t.cast<cplx>().asDiagonal() * gp.f_frame.rightCols(tail).adjoint();
  gi.e_plus0 = gp.e_frame.leftCols(n);
  gi.e_minus0 = gp.f_frame.leftCols(n).adjoint();
  gi.e_mp0 = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) gi.e_mp0(i, i) = -gp.t(i);
  return out;
}

GrushinResiduals verify_grushin(const GrushinSystem& g, const CMatrix& a) {
  const GrushinProblem& gp = g.problem;
  const CMatrix p = gp.bordered(a);
  const CMatrix e = g.inverse.block();
  const CMatrix id = CMatrix::Identity(p.rows(), p.cols());

  GrushinResiduals r;
  r.right_identity = op_norm(p * e - id);
  r.left_identity = op_norm(e * p - id);
  r.norm_e0 = op_norm(g.inverse.e0);
  r.norm_e_plus0 = op_norm(g.inverse.e_plus0);
  r.norm_e_minus0 = op_norm(g.inverse.e_minus0);
  r.norm_e_mp0 = op_norm(g.inverse.e_mp0);

  const CMatrix s = shifted(a, gp.z0);
  const CMatrix se = s * gp.e_frame - gp.f_frame * gp.t.cast<cplx>().asDiagonal();
  const CMatrix sf = s.adjoint() * gp.f_frame - gp.e_frame * gp.t.cast<cplx>().asDiagonal();
  r.max_pairing = std::max(se.colwise().norm().maxCoeff(), sf.colwise().norm().maxCoeff());

  const CMatrix id_d = CMatrix::Identity(gp.dim(), gp.dim());
  r.max_orthonormal = std::max((gp.e_frame.adjoint() * gp.e_frame - id_d).cwiseAbs().maxCoeff(),
                               (gp.f_frame.adjoint() * gp.f_frame - id_d).cwiseAbs().maxCoeff());
  return r;
}

NeumannDecomposition perturbed_effective(const GrushinSystem& g, const CMatrix& a, const PerturbationDraw& q,
                                         double delta) {
  const GrushinProblem& gp = g.problem;
  const GrushinInverse& gi = g.inverse;
  const Eigen::Index d = gp.dim();
  const Eigen::Index n = gp.n_small;
  if (a.rows() != d || a.cols() != d || q.q_matrix.rows() != d || q.q_matrix.cols() != d) {
    throw std::invalid_argument("perturbed_effective: dimensions disagree");
  }

  NeumannDecomposition nd;
  nd.q_norm = op_norm(q.q_matrix);
  nd.q_hs_norm = q.q_matrix.norm();
  nd.valid = delta * nd.q_norm / std::sqrt(gp.alpha) < 1.0 - gp.epsilon0;

  // Ground truth: invert the bordered matrix of the perturbed operator.
  CMatrix p = gp.bordered(a + delta * q.q_matrix);
  const auto sv = singular_values(p);
  nd.singular = sv.smallest() <= 1e-14 * sv.largest();
  const CMatrix inv = p.partialPivLu().inverse();
  nd.e_delta = inv.topLeftCorner(d, d);
  nd.e_plus_delta = inv.topRightCorner(d, n);
  nd.e_minus_delta = inv.bottomLeftCorner(n, d);
  nd.e_mp_delta = inv.bottomRightCorner(n, n);

  const CMatrix middle = gi.e_minus0 * q.q_matrix * gi.e_plus0;
  nd.first_order = gi.e_mp0 - delta * middle;
  const CMatrix gap = nd.e_mp_delta - nd.first_order;
  nd.first_order_gap = op_norm(gap);
  nd.tail = delta > 0.0 ? CMatrix(gap / delta) : CMatrix::Zero(n, n);
  nd.remainder_norm = nd.tail.norm();

  if (nd.valid && n > 0) {
    // T = sum_{j>=2} (-1)^j E-0 (delta Q E0)^(j-1) Q E+0
    const CMatrix step = delta * q.q_matrix * gi.e0;
    CMatrix right = q.q_matrix * gi.e_plus0;  // (delta Q E0)^(j-1) Q E+0
    nd.tail_series = CMatrix::Zero(n, n);
    double sign = 1.0;
    for (int j = 2; j < 500; ++j) {
      right = step * right;
      const CMatrix term = sign * (gi.e_minus0 * right);
      nd.tail_series += term;
      sign = -sign;
      if (term.norm() <= 1e-18 * std::max(1.0, nd.tail_series.norm())) break;
    }
  }

  if (n > 0 && (q.s1.size() == d || q.s2.size() == d)) {
    if (q.s1.size() == d) nd.t1_factor = ascending_values(gi.e_minus0 * q.s1.cast<cplx>().asDiagonal());
    if (q.s2.size() == d) nd.t2_factor = ascending_values(q.s2.cast<cplx>().asDiagonal() * gi.e_plus0);
  }
  return nd;
}

SchurComparison schur_check(const GrushinSystem& g, const CMatrix& a, const PerturbationDraw& q, double delta) {
  return schur_check(g, a, q, delta, perturbed_effective(g, a, q, delta));
}

SchurComparison schur_check(const GrushinSystem& g, const CMatrix& a, const PerturbationDraw& q, double delta,
                            const NeumannDecomposition& nd) {
  const GrushinProblem& gp = g.problem;
  SchurComparison out;
  out.sigma_min_full = smallest_singular_value(shifted(a + delta * q.q_matrix, gp.z0));
  const bool full_zero = out.sigma_min_full <= kSchurZeroTolerance;

  if (gp.n_small == 0) {
    out.sigma_min_effective = std::numeric_limits<double>::infinity();
    out.constant = std::numeric_limits<double>::quiet_NaN();
    out.consistent = !full_zero;
    return out;
  }
  out.sigma_min_effective = smallest_singular_value(nd.e_mp_delta);
  const bool eff_zero = out.sigma_min_effective <= kSchurZeroTolerance;

  const double sqrt_alpha = std::sqrt(gp.alpha);
  out.constant = sqrt_alpha * (out.sigma_min_effective * op_norm(nd.e_delta) +
                               op_norm(nd.e_minus_delta) * op_norm(nd.e_plus_delta));
  const double lhs = sqrt_alpha * out.sigma_min_effective;
  const double rhs = out.constant * out.sigma_min_full;
  const bool bound = lhs <= rhs * (1.0 + 1e-8) + kSchurZeroTolerance * out.constant;
  out.consistent = bound && (full_zero == eff_zero);
  return out;
}

ReducedProfiles reduced_profiles(const GrushinSystem& g, const CMatrix& a, const MultiplierMatrix& s1,
                                 const MultiplierMatrix& s2, const CMatrix& gaussian, double slack) {
  const GrushinProblem& gp = g.problem;
  const GrushinInverse& gi = g.inverse;
  const Eigen::Index d = gp.dim();
  if (s1.dim() != d || s2.dim() != d) throw std::invalid_argument("reduced_profiles: multiplier size mismatch");

  ReducedProfiles out;
  const CMatrix left = gi.e_minus0 * s1.diag.cast<cplx>().asDiagonal();
  const CMatrix right = s2.diag.cast<cplx>().asDiagonal() * gi.e_plus0;
  out.profile_1 = ascending_values(left);
  out.profile_2 = ascending_values(right);
  out.upper = std::max(operator_norms(s1).op, operator_norms(s2).op);
  if (gaussian.rows() == d && gaussian.cols() == d) out.reduced_gaussian = left * gaussian * right;

  if (gp.n_small == 0) {
    out.cs_lower = std::numeric_limits<double>::infinity();
    out.bracket_holds = true;
    return out;
  }
  out.cs_lower = std::min(estimate_cs(a, gp.z0, gp.alpha, s1, Side::left).cs_lower,
                          estimate_cs(a, gp.z0, gp.alpha, s2, Side::right).cs_lower);
  auto inside = [&](const Eigen::VectorXd& v) {
    return v.minCoeff() >= out.cs_lower - slack && v.maxCoeff() <= out.upper + slack;
  };
  out.bracket_holds = inside(out.profile_1) && inside(out.profile_2);
  return out;
}

}  // namespace fredlab
