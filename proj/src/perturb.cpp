#include "fredlab/perturb.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "fredlab/spectral.hpp"

namespace fredlab {

void CutoffSpec::validate() const {
  if (!(plateau_radius > 0.0)) throw std::invalid_argument("cutoff: plateau radius must be positive");
  if (profile == CutoffProfile::smooth_bump ? !(plateau_radius < support_radius)
                                            : !(plateau_radius <= support_radius)) {
    throw std::invalid_argument("cutoff: need plateau radius below support radius");
  }
}

double CutoffSpec::operator()(double r) const {
  if (r <= plateau_radius) return 1.0;
  if (profile == CutoffProfile::hard_indicator || r >= support_radius) return 0.0;
  // exp(-1/x) partition: smooth, monotone, flat at both ends.
  const double t = (r - plateau_radius) / (support_radius - plateau_radius);
  auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double up = f(1.0 - t);
  return up / (up + f(t));
}

CutoffConstants cutoff_constants(const LatticeSpec& spec, cplx beta, int grid_n) {
  CutoffConstants out;
  double max_pair = 0.0;
  for (int p = 0; p < grid_n; ++p) {
    for (int q = 0; q < grid_n; ++q) {
      const cplx z = (static_cast<double>(p) / grid_n) * spec.gamma_gens[0] +
                     (static_cast<double>(q) / grid_n) * spec.gamma_gens[1];
      const double up = std::abs(potential_value(spec, z, beta));
      const double um = std::abs(potential_value(spec, -z, beta));
      out.max_abs_u = std::max(out.max_abs_u, std::max(up, um));
      max_pair = std::max(max_pair, up + um);
    }
  }
  out.c = max_pair * max_pair;
  // Any C2 strictly above sqrt(27 C)/2 works; keep a 1% margin.
  out.c2 = 1.01 * std::sqrt(27.0 * out.c) / 2.0;
  return out;
}

CutoffSpec default_cutoff(const LatticeSpec& spec, cplx beta) {
  const auto k = cutoff_constants(spec, beta);
  CutoffSpec c;
  c.plateau_radius = std::sqrt(k.c1 * k.c2);
  c.support_radius = std::sqrt(3.0) * c.plateau_radius;
  c.profile = CutoffProfile::hard_indicator;
  return c;
}

MultiplierMatrix MultiplierMatrix::identity(Eigen::Index dim) { return constant(dim, 1.0); }

MultiplierMatrix MultiplierMatrix::constant(Eigen::Index dim, double value) {
  MultiplierMatrix m;
  m.diag = Eigen::VectorXd::Constant(dim, value);
  return m;
}

MultiplierMatrix build_multiplier(const LatticeSpec& spec, const CutoffSpec& cutoff, const TruncationBasis& basis,
                                  double h) {
  cutoff.validate();
  if (!(h > 0.0)) throw std::invalid_argument("build_multiplier: h must be positive");
  const auto b = static_cast<Eigen::Index>(basis.dim_scalar());
  MultiplierMatrix m;
  m.h = h;
  m.cutoff = cutoff;
  m.diag.resize(2 * b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const double v = cutoff(h * std::abs(dual_point(spec, basis[static_cast<std::size_t>(i)])));
    m.diag(i) = v;
    m.diag(b + i) = v;
  }
  return m;
}

CMatrix sample_gaussian(Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("sample_gaussian: dim must be positive");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = normal(gen);
      const double im = normal(gen);
      g(i, j) = cplx{re, im};
    }
  }
  return g;
}

PerturbationDraw assemble_q(const MultiplierMatrix& s1, const CMatrix& g, const MultiplierMatrix& s2, double delta,
                            std::uint64_t seed) {
  if (g.rows() != s1.dim() || g.cols() != s2.dim()) {
    throw std::invalid_argument("assemble_q: multiplier sizes " + std::to_string(s1.dim()) + "/" +
                                std::to_string(s2.dim()) + " do not match the " + std::to_string(g.rows()) + "x" +
                                std::to_string(g.cols()) + " Gaussian matrix");
  }
  if (delta < 0.0) throw std::invalid_argument("assemble_q: delta must be nonnegative");
  PerturbationDraw d;
  d.gaussian = g;
  d.delta = delta;
  d.seed = seed;
  d.s1 = s1.diag;
  d.s2 = s2.diag;
  d.q_matrix = s1.diag.cast<cplx>().asDiagonal() * g * s2.diag.cast<cplx>().asDiagonal();
  return d;
}

MultiplierNorms operator_norms(const MultiplierMatrix& m) {
  MultiplierNorms n;
  if (m.diag.size() == 0) return n;
  const Eigen::VectorXd a = m.diag.cwiseAbs();
  n.op = a.maxCoeff();
  n.hs = a.norm();
  n.trace = a.sum();
  return n;
}

SubspaceConditioning estimate_cs(const CMatrix& a, cplx z0, double alpha, const MultiplierMatrix& s, Side side) {
  if (!(alpha > 0.0)) throw std::invalid_argument("estimate_cs: alpha must be positive");
  if (a.rows() != a.cols() || s.dim() != a.rows()) throw std::invalid_argument("estimate_cs: dimension mismatch");
  const CMatrix shifted = a - z0 * CMatrix::Identity(a.rows(), a.cols());
  const auto svd = singular_values(shifted, true);

  SubspaceConditioning out;
  out.alpha = alpha;
  const Eigen::Index dim = svd.values.size();
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (svd.values(i) * svd.values(i) <= alpha) ++out.n_small;
  }
  if (out.n_small == 0) {
    out.constrained = false;
    out.cs_lower = std::numeric_limits<double>::infinity();
    return out;
  }
  const CMatrix& frame = side == Side::left ? *svd.left_vectors : *svd.right_vectors;
  const CMatrix sub = frame.rightCols(out.n_small);
  const CMatrix image = s.diag.cast<cplx>().asDiagonal() * sub;
  out.cs_lower = singular_values(image).smallest();
  return out;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> coords) {
  std::uint64_t s = mix64(root);
  for (const auto c : coords) s = mix64(s ^ mix64(c + 0x632be59bd9b4e019ULL));
  return s;
}

}  // namespace fredlab
