#include "fredlab/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fredlab {

void BoundParams::validate(bool need_kappa) const {
  if (!(c0 > 0.0 && c1 > 0.0 && c2 > 0.0)) throw std::invalid_argument("bounds: c0, c1, c2 must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("bounds: alpha must be positive");
  if (need_kappa && !(kappa > 2.0)) throw std::invalid_argument("bounds: kappa must exceed 2");
}

GeneralBound evaluate_general_bound(const BoundParams& p, const MultiplierNorms& s1, const MultiplierNorms& s2,
                                    double alpha, double delta) {
  p.validate(false);
  if (!(alpha > 0.0)) throw std::invalid_argument("bounds: alpha must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("bounds: delta must be positive");
  if (!(s1.op > 0.0 && s2.op > 0.0)) throw std::invalid_argument("bounds: multipliers must be nonzero");
  GeneralBound b;
  b.numerator_norms = s1.op * s1.trace * s2.hs * s2.hs;
  b.denominator_norms = 2.0 * std::pow(s1.op, 1.5) * s2.op;
  b.exponent = (p.c0 * b.numerator_norms - alpha / (delta * delta)) / b.denominator_norms;
  b.probability = std::max(1.0 - p.c0 * std::exp(b.exponent), 0.0);
  // 1 - C0 e^E > 0  <=>  alpha / delta^2 > C0 X + 2 Y log C0 (Y = denominator / 2)
  const double edge = p.c0 * b.numerator_norms + b.denominator_norms * std::log(p.c0);
  b.nontrivial_delta = edge > 0.0 ? std::sqrt(alpha / edge) : std::numeric_limits<double>::infinity();
  return b;
}

MultiplierNorms tbg_multiplier_norms(const LatticeSpec& spec, const CutoffSpec& cutoff, double h) {
  cutoff.validate();
  if (!(h > 0.0)) throw std::invalid_argument("bounds: h must be positive");
  // |m g1 + n g2| >= max(|m|, |n|) |g| / 2 for the 120 degree dual basis, so a
  // box of half-width 2 R / (h |g|) holds every mode with h|k| <= R.
  const double g = std::min(std::abs(spec.dual_gens[0]), std::abs(spec.dual_gens[1]));
  const int K = static_cast<int>(std::ceil(2.0 * cutoff.support_radius / (h * g))) + 1;
  return operator_norms(build_multiplier(spec, cutoff, TruncationBasis(K), h));
}

TbgBound evaluate_tbg_bound(const BoundParams& p, const LatticeSpec& spec, const CutoffSpec& cutoff, double h) {
  p.validate(true);
  TbgBound b;
  b.h = h;
  b.delta = std::pow(h, p.kappa);
  b.norms = tbg_multiplier_norms(spec, cutoff, h);
  b.general = evaluate_general_bound(p, b.norms, b.norms, p.alpha, b.delta);
  b.probability = 1.0 - p.c1 * std::exp(-p.c2 / std::pow(h, 2.0 * p.kappa));
  return b;
}

ExponentScaling exponent_scaling(const BoundParams& p, const LatticeSpec& spec, const CutoffSpec& cutoff,
                                 const std::vector<double>& hs) {
  if (hs.size() < 2) throw std::invalid_argument("exponent_scaling: need at least two values of h");
  ExponentScaling out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double h : hs) {
    const TbgBound b = evaluate_tbg_bound(p, spec, cutoff, h);
    out.h.push_back(h);
    out.exponent.push_back(b.general.exponent);
    const double x = std::log(h);
    const double y = std::log(std::abs(b.general.exponent));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(hs.size());
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

}  // namespace fredlab
