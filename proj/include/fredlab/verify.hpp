#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fredlab/grushin.hpp"
#include "fredlab/lattice.hpp"
#include "fredlab/perturb.hpp"

namespace fredlab {

/// Which operator a verification run works on.
///  - "tbg": chiral operator on the box of half-width K at 1/h = inv_h,
///    multipliers chi(h|D|) from the cutoff (default cutoff when absent).
///  - "seeley": e^{ix} d/dx on 2K + 1 Fourier modes, identity multipliers.
///  - "random": dim x dim complex Gaussian drawn from root_seed, identity
///    multipliers.
struct GrushinVerifyConfig {
  std::string op = "tbg";
  int K = 3;
  double inv_h = 0.586;
  cplx beta{1.0, 0.0};
  int dim = 50;
  cplx z0{};
  /// Absent: the median of t^2 over the spectrum of A - z0.
  std::optional<double> alpha = 0.05;
  double epsilon0 = 0.1;
  double delta = 1e-3;
  int draws = 200;
  std::vector<double> slope_deltas{1e-3, 1e-4, 1e-5};
  std::uint64_t root_seed = 0;
  int threads = 1;
  std::optional<CutoffSpec> cutoff;
};

struct VerifyOperator {
  CMatrix a;
  MultiplierMatrix s1;
  MultiplierMatrix s2;
};

VerifyOperator build_verify_operator(const GrushinVerifyConfig& c);

struct GrushinDrawRow {
  int draw = 0;
  std::uint64_t seed = 0;
  bool valid = false;
  bool singular = false;
  double first_order_gap = 0.0;
  double remainder_norm = 0.0;
  double reconstruction_error = 0.0;  // series vs direct, 0 when not valid
  double sigma_min_full = 0.0;
  double sigma_min_effective = 0.0;
  double constant = 0.0;
  bool consistent = false;
};

struct SlopeFit {
  std::vector<double> deltas;
  std::vector<double> gaps;
  double slope = 0.0;
  bool valid = false;  // the Neumann condition held at every delta
};

struct GrushinVerifyReport {
  double alpha = 0.0;
  int n_small = 0;
  Eigen::Index dim = 0;
  GrushinResiduals residuals;
  bool exact = false;       // both identity residuals <= 1e-10
  bool norm_table = false;  // with 1e-10 slack
  std::vector<GrushinDrawRow> draws;
  double valid_rate = 0.0;
  double consistency_rate = 0.0;
  double max_reconstruction_error = 0.0;
  SlopeFit slope;
};

inline constexpr double kGrushinTolerance = 1e-10;

GrushinVerifyReport grushin_verify(const GrushinVerifyConfig& c);

/// ‖E-+^delta - first order‖ at each delta for one fixed draw, and the
/// log-log slope through them.
SlopeFit neumann_slope(const GrushinSystem& g, const CMatrix& a, const PerturbationDraw& q,
                       const std::vector<double>& deltas);

struct OracleCheck {
  int K = 0;
  int vectors = 0;
  int grid = 0;
  double max_relative_error = 0.0;
};

/// Compares the assembled matrix against the FFT evaluation on `vectors`
/// random coefficient vectors.
OracleCheck oracle_check(int K, int vectors, std::uint64_t seed, double h = 1.0, cplx beta = {1.0, 0.0},
                         int grid_n = 0);

}  // namespace fredlab
