#include "fredlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "fredlab/models.hpp"
#include "fredlab/parallel.hpp"
#include "fredlab/spectral.hpp"

namespace fredlab {

VerifyOperator build_verify_operator(const GrushinVerifyConfig& c) {
  VerifyOperator out;
  if (c.op == "tbg") {
    const LatticeSpec spec = make_lattice();
    const TruncationBasis basis(c.K);
    const double h = 1.0 / c.inv_h;
    out.a = assemble_dh(spec, {h, c.beta, 0.0}, basis).entries;
    const CutoffSpec cut = c.cutoff ? *c.cutoff : default_cutoff(spec, c.beta);
    out.s1 = build_multiplier(spec, cut, basis, h);
    out.s2 = out.s1;
  } else if (c.op == "seeley") {
    SeeleyParams p;
    p.a_coeffs = {{1, cplx{1.0, 0.0}}};
    p.K = c.K;
    out.a = assemble_seeley(p).entries;
    out.s1 = MultiplierMatrix::identity(out.a.rows());
    out.s2 = out.s1;
  } else if (c.op == "random") {
    if (c.dim < 1) throw std::invalid_argument("grushin-verify: dim must be positive");
    out.a = sample_gaussian(c.dim, derive_seed(c.root_seed, {0xA11CEULL}));
    out.s1 = MultiplierMatrix::identity(c.dim);
    out.s2 = out.s1;
  } else {
    throw std::invalid_argument("grushin-verify: unknown operator '" + c.op + "' (tbg, seeley, random)");
  }
  return out;
}

SlopeFit neumann_slope(const GrushinSystem& g, const CMatrix& a, const PerturbationDraw& q,
                       const std::vector<double>& deltas) {
  SlopeFit f;
  f.deltas = deltas;
  f.valid = true;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double d : deltas) {
    const NeumannDecomposition nd = perturbed_effective(g, a, q, d);
    f.valid = f.valid && nd.valid;
    f.gaps.push_back(nd.first_order_gap);
    const double x = std::log(d), y = std::log(nd.first_order_gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(deltas.size());
  f.slope = deltas.size() >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  return f;
}

GrushinVerifyReport grushin_verify(const GrushinVerifyConfig& c) {
  const VerifyOperator op = build_verify_operator(c);
  const Eigen::Index dim = op.a.rows();

  double alpha = 0.0;
  if (c.alpha) {
    alpha = *c.alpha;
  } else {
    const auto sv = singular_values(CMatrix(op.a - c.z0 * CMatrix::Identity(dim, dim)));
    std::vector<double> t2(static_cast<std::size_t>(sv.values.size()));
    for (Eigen::Index i = 0; i < sv.values.size(); ++i) t2[static_cast<std::size_t>(i)] = sv.values(i) * sv.values(i);
    std::sort(t2.begin(), t2.end());
    alpha = t2[(t2.size() - 1) / 2];
  }

  const GrushinSystem g = build_grushin(op.a, c.z0, alpha, c.epsilon0);
  GrushinVerifyReport r;
  r.alpha = alpha;
  r.n_small = g.problem.n_small;
  r.dim = dim;
  r.residuals = verify_grushin(g, op.a);
  r.exact = r.residuals.right_identity <= kGrushinTolerance && r.residuals.left_identity <= kGrushinTolerance;
  r.norm_table = r.residuals.norm_table_holds(alpha, r.n_small, kGrushinTolerance);

  r.draws.resize(static_cast<std::size_t>(std::max(0, c.draws)));
  parallel_for(r.draws.size(), c.threads, [&](std::size_t i) {
    GrushinDrawRow& row = r.draws[i];
    row.draw = static_cast<int>(i);
    row.seed = derive_seed(c.root_seed, {i});
    const PerturbationDraw q = assemble_q(op.s1, sample_gaussian(dim, row.seed), op.s2, c.delta, row.seed);
    const NeumannDecomposition nd = perturbed_effective(g, op.a, q, c.delta);
    row.valid = nd.valid;
    row.singular = nd.singular;
    row.first_order_gap = nd.first_order_gap;
    row.remainder_norm = nd.remainder_norm;
    if (nd.valid && nd.tail_series.size() > 0) {
      const CMatrix rebuilt =
          g.inverse.e_mp0 + c.delta * (-(g.inverse.e_minus0 * q.q_matrix * g.inverse.e_plus0) + nd.tail_series);
      row.reconstruction_error = (rebuilt - nd.e_mp_delta).cwiseAbs().maxCoeff();
    }
    const SchurComparison sc = schur_check(g, op.a, q, c.delta, nd);
    row.sigma_min_full = sc.sigma_min_full;
    row.sigma_min_effective = sc.sigma_min_effective;
    row.constant = sc.constant;
    row.consistent = sc.consistent;
  });

  std::size_t valid = 0, consistent = 0;
  for (const auto& row : r.draws) {
    valid += row.valid;
    consistent += row.consistent;
    r.max_reconstruction_error = std::max(r.max_reconstruction_error, row.reconstruction_error);
  }
  const double n = static_cast<double>(std::max<std::size_t>(1, r.draws.size()));
  r.valid_rate = static_cast<double>(valid) / n;
  r.consistency_rate = static_cast<double>(consistent) / n;

  if (r.n_small > 0 && !c.slope_deltas.empty()) {
    const std::uint64_t seed = derive_seed(c.root_seed, {0x5107EULL});
    const PerturbationDraw q = assemble_q(op.s1, sample_gaussian(dim, seed), op.s2, c.delta, seed);
    r.slope = neumann_slope(g, op.a, q, c.slope_deltas);
  }
  return r;
}

OracleCheck oracle_check(int K, int vectors, std::uint64_t seed, double h, cplx beta, int grid_n) {
  const LatticeSpec spec = make_lattice();
  const TruncationBasis basis(K);
  const ChiralModelParams params{h, beta, 0.0};
  const OperatorMatrix m = assemble_dh(spec, params, basis);
  OracleCheck out;
  out.K = K;
  out.vectors = vectors;
  out.grid = grid_n == 0 ? 4 * K + 4 : grid_n;
  for (int v = 0; v < vectors; ++v) {
    std::mt19937_64 gen(derive_seed(seed, {static_cast<std::uint64_t>(K), static_cast<std::uint64_t>(v)}));
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CVector c(m.dim());
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      const double re = normal(gen);
      const double im = normal(gen);
      c(i) = cplx{re, im};
    }
    const CVector direct = m.entries * c;
    const CVector gridded = apply_dh_gridded(spec, params, basis, c, grid_n);
    out.max_relative_error = std::max(out.max_relative_error, (direct - gridded).norm() / direct.norm());
  }
  return out;
}

}  // namespace fredlab
