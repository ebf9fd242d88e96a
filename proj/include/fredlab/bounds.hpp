#pragma once

#include <vector>

#include "fredlab/lattice.hpp"
#include "fredlab/perturb.hpp"

namespace fredlab {

/// Unnamed constants of the probability bounds. Nothing here is known from
/// first principles; every value is an input, 1 by default.
struct BoundParams {
  double c0 = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double kappa = 3.0;
  double alpha = 1.0;

  /// Constants positive; kappa > 2 only when the TBG regime is evaluated.
  void validate(bool need_kappa) const;
};

struct GeneralBound {
  double numerator_norms = 0.0;    // ‖S1‖ ‖S1‖_Tr ‖S2‖_HS^2
  double denominator_norms = 0.0;  // 2 ‖S1‖^(3/2) ‖S2‖
  double exponent = 0.0;
  double probability = 0.0;        // max(1 - C0 e^exponent, 0)
  double nontrivial_delta = 0.0;   // bound > 0 for delta below this (+inf: always)
};

/// Lower bound on the probability of discrete spectrum for A + delta Q.
GeneralBound evaluate_general_bound(const BoundParams& p, const MultiplierNorms& s1, const MultiplierNorms& s2,
                                    double alpha, double delta);

/// Norms of chi(h|D|) on the full lattice (both components). The box is
/// widened until it contains the support of the cutoff.
MultiplierNorms tbg_multiplier_norms(const LatticeSpec& spec, const CutoffSpec& cutoff, double h);

struct TbgBound {
  double h = 0.0;
  double delta = 0.0;  // h^kappa
  MultiplierNorms norms;
  GeneralBound general;
  double probability = 0.0;  // 1 - C1 exp(-C2 / h^(2 kappa))
};

TbgBound evaluate_tbg_bound(const BoundParams& p, const LatticeSpec& spec, const CutoffSpec& cutoff, double h);

struct ExponentScaling {
  std::vector<double> h;
  std::vector<double> exponent;
  double slope = 0.0;  // of log|exponent| against log h
};

/// Evaluates the general exponent at delta = h^kappa with S1 = S2 = chi(h|D|)
/// for each h and fits its log-log slope, which tends to -2 kappa.
ExponentScaling exponent_scaling(const BoundParams& p, const LatticeSpec& spec, const CutoffSpec& cutoff,
                                 const std::vector<double>& hs);

}  // namespace fredlab
