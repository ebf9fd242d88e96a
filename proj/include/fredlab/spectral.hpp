#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fredlab/models.hpp"

namespace fredlab {

/// Thrown when a dense decomposition does not converge. The fingerprint
/// identifies the input bits so the failure can be reproduced.
class SpectralError : public std::runtime_error {
 public:
  SpectralError(const std::string& what, std::uint64_t fingerprint)
      : std::runtime_error(what), fingerprint_(fingerprint) {}
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  std::uint64_t fingerprint_;
};

struct SpectrumResult {
  std::vector<cplx> eigenvalues;
  Eigen::Index dim = 0;
  std::chrono::duration<double> wall_time{0};
};

/// Singular values in the order the decomposition returns them
/// (nonincreasing). ascending() gives t_1 <= t_2 <= ...
struct SingularSpectrum {
  Eigen::VectorXd values;
  std::optional<CMatrix> left_vectors;   // columns u_i
  std::optional<CMatrix> right_vectors;  // columns v_i, A v_i = t_i u_i

  Eigen::VectorXd ascending() const { return values.reverse(); }
  double smallest() const { return values.size() == 0 ? 0.0 : values(values.size() - 1); }
  double largest() const { return values.size() == 0 ? 0.0 : values(0); }
};

/// FNV-1a hash over dimensions and entry bits.
std::uint64_t matrix_fingerprint(const CMatrix& m);

SpectrumResult eigenvalues(const CMatrix& m);
inline SpectrumResult eigenvalues(const OperatorMatrix& m) { return eigenvalues(m.entries); }

SingularSpectrum singular_values(const CMatrix& m, bool with_vectors = false);
inline SingularSpectrum singular_values(const OperatorMatrix& m, bool with_vectors = false) {
  return singular_values(m.entries, with_vectors);
}

double smallest_singular_value(const CMatrix& m);
double operator_norm(const CMatrix& m);

std::size_t count_in_disk(const SpectrumResult& s, cplx center, double radius);

/// log|det m| from an LU factorisation; -inf for an exactly singular matrix.
double log_abs_det(const CMatrix& m);

/// Smallest |lambda - center| over the spectrum; +inf when empty.
double min_distance(const SpectrumResult& s, cplx center);

/// Pins the BLAS backend to one thread so results do not depend on how many
/// workers call into it. Idempotent.
void pin_backend_threads();

}  // namespace fredlab
