#include "fredlab/models.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fredlab {

namespace {

std::string box_ref(const TruncationBasis& basis) {
  return "box:K=" + std::to_string(basis.half_width());
}

// FFTW's planner is not re-entrant.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPlan2d {
 public:
  FftPlan2d(int n, int sign) : n_(n) {
    buf_ = fftw_alloc_complex(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft_2d(n, n, buf_, buf_, sign, FFTW_ESTIMATE);
  }
  FftPlan2d(const FftPlan2d&) = delete;
  FftPlan2d& operator=(const FftPlan2d&) = delete;
  ~FftPlan2d() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(buf_);
  }

  cplx* data() { return reinterpret_cast<cplx*>(buf_); }
  cplx& at(int p, int q) { return data()[static_cast<std::size_t>(p) * n_ + q]; }
  void execute() { fftw_execute(plan_); }

 private:
  int n_;
  fftw_complex* buf_ = nullptr;
  fftw_plan plan_ = nullptr;
};

int wrap(int f, int n) {
  const int r = f % n;
  return r < 0 ? r + n : r;
}

}  // namespace

bool OperatorMatrix::all_finite() const { return entries.allFinite(); }

cplx potential_value(const LatticeSpec& spec, cplx z, cplx beta) {
  cplx sum{0.0, 0.0};
  cplx wj{1.0, 0.0};
  for (int j = 0; j < 3; ++j) {
    sum += wj * std::exp(0.5 * (z * std::conj(wj) - std::conj(z) * wj));
    wj *= spec.omega;
  }
  return beta * sum;
}

OperatorMatrix assemble_dh(const LatticeSpec& spec, const ChiralModelParams& params,
                           const TruncationBasis& basis) {
  if (basis.dim_scalar() == 0) throw std::invalid_argument("assemble_dh: empty basis");
  const auto b = static_cast<Eigen::Index>(basis.dim_scalar());
  OperatorMatrix out;
  out.entries = CMatrix::Zero(2 * b, 2 * b);
  out.block_kind = BlockKind::two_by_two;
  out.block_size = basis.dim_scalar();
  out.basis_ref = box_ref(basis);

  const auto shifts = potential_shifts(spec);
  for (Eigen::Index col = 0; col < b; ++col) {
    const DualIndex k = basis[static_cast<std::size_t>(col)];
    const cplx diag = params.h * dual_point(spec, k) - params.z_shift;
    out.entries(col, col) = diag;
    out.entries(b + col, b + col) = diag;
    for (const auto& s : shifts) {
      // U(z) moves e_k to e_{k + kappa}; modes leaving the box are dropped.
      if (auto row = basis.index_of(k + s.shift)) {
        out.entries(static_cast<Eigen::Index>(*row), b + col) += params.beta * s.coefficient;
      }
      if (auto row = basis.index_of(k + (-s.shift))) {
        out.entries(b + static_cast<Eigen::Index>(*row), col) += params.beta * s.coefficient;
      }
    }
  }
  return out;
}

OperatorMatrix assemble_dh_adjoint(const LatticeSpec& spec, const ChiralModelParams& params,
                                   const TruncationBasis& basis) {
  const auto b = static_cast<Eigen::Index>(basis.dim_scalar());
  OperatorMatrix out;
  out.entries = CMatrix::Zero(2 * b, 2 * b);
  out.block_kind = BlockKind::two_by_two;
  out.block_size = basis.dim_scalar();
  out.basis_ref = box_ref(basis) + ":adjoint";

  // (2h D_zbar)^* = 2h D_z acts as h conj(k). Multiplication by conj(U(z))
  // sends e_k to sum_j conj(omega^j) e_{k - kappa_j}, and conj(U(-z)) uses
  // +kappa_j. The adjoint swaps the off-diagonal blocks.
  const auto shifts = potential_shifts(spec);
  const cplx beta_bar = std::conj(params.beta);
  for (Eigen::Index col = 0; col < b; ++col) {
    const DualIndex k = basis[static_cast<std::size_t>(col)];
    const cplx diag = params.h * std::conj(dual_point(spec, k)) - std::conj(params.z_shift);
    out.entries(col, col) = diag;
    out.entries(b + col, b + col) = diag;
    for (const auto& s : shifts) {
      const cplx c = beta_bar * std::conj(s.coefficient);
      if (auto row = basis.index_of(k + s.shift)) {
        out.entries(static_cast<Eigen::Index>(*row), b + col) += c;
      }
      if (auto row = basis.index_of(k + (-s.shift))) {
        out.entries(b + static_cast<Eigen::Index>(*row), col) += c;
      }
    }
  }
  return out;
}

int min_alias_free_grid(int half_width) { return 2 * half_width + 3; }

CVector apply_dh_gridded(const LatticeSpec& spec, const ChiralModelParams& params,
                         const TruncationBasis& basis, const CVector& coeffs, int grid_n) {
  const auto b = static_cast<Eigen::Index>(basis.dim_scalar());
  if (coeffs.size() != 2 * b) {
    throw std::invalid_argument("apply_dh_gridded: coefficient vector has length " +
                                std::to_string(coeffs.size()) + ", expected " + std::to_string(2 * b));
  }
  const int K = basis.half_width();
  const int n = grid_n == 0 ? 4 * K + 4 : grid_n;
  if (n < min_alias_free_grid(K)) {
    throw std::invalid_argument("apply_dh_gridded: grid " + std::to_string(n) + " aliases shifted modes; need at least " +
                                std::to_string(min_alias_free_grid(K)));
  }

  // With z = s*gamma_1 + t*gamma_2, e_k(z) = exp(2 pi i (fs*s + ft*t)) where
  // fs = Re(gamma_1 conj k)/2pi and ft = Re(gamma_2 conj k)/2pi are integers.
  using std::numbers::pi;
  std::vector<std::pair<int, int>> freq(static_cast<std::size_t>(b));
  for (Eigen::Index i = 0; i < b; ++i) {
    const cplx k = dual_point(spec, basis[static_cast<std::size_t>(i)]);
    freq[static_cast<std::size_t>(i)] = {
        static_cast<int>(std::lround(0.5 * duality_pairing(spec.gamma_gens[0], k) / (2.0 * pi))),
        static_cast<int>(std::lround(0.5 * duality_pairing(spec.gamma_gens[1], k) / (2.0 * pi)))};
  }

  FftPlan2d synth(n, FFTW_BACKWARD);
  FftPlan2d analyse(n, FFTW_FORWARD);
  const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(n));

  auto to_grid = [&](Eigen::Index offset) {
    std::fill(synth.data(), synth.data() + static_cast<std::size_t>(n) * n, cplx{});
    for (Eigen::Index i = 0; i < b; ++i) {
      const auto [fs, ft] = freq[static_cast<std::size_t>(i)];
      synth.at(wrap(fs, n), wrap(ft, n)) = coeffs(offset + i);
    }
    synth.execute();
    return std::vector<cplx>(synth.data(), synth.data() + static_cast<std::size_t>(n) * n);
  };
  const std::vector<cplx> u1 = to_grid(0);
  const std::vector<cplx> u2 = to_grid(b);

  std::vector<cplx> u_plus(static_cast<std::size_t>(n) * n);
  std::vector<cplx> u_minus(u_plus.size());
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const cplx z = (static_cast<double>(p) / n) * spec.gamma_gens[0] + (static_cast<double>(q) / n) * spec.gamma_gens[1];
      u_plus[static_cast<std::size_t>(p) * n + q] = potential_value(spec, z, params.beta);
      u_minus[static_cast<std::size_t>(p) * n + q] = potential_value(spec, -z, params.beta);
    }
  }

  CVector out(2 * b);
  auto project = [&](const std::vector<cplx>& pot, const std::vector<cplx>& u, Eigen::Index offset) {
    for (std::size_t j = 0; j < u.size(); ++j) analyse.data()[j] = pot[j] * u[j];
    analyse.execute();
    for (Eigen::Index i = 0; i < b; ++i) {
      const auto [fs, ft] = freq[static_cast<std::size_t>(i)];
      out(offset + i) = analyse.at(wrap(fs, n), wrap(ft, n)) * norm;
    }
  };
  project(u_plus, u2, 0);
  project(u_minus, u1, b);

  for (Eigen::Index i = 0; i < b; ++i) {
    const cplx mult = params.h * dual_point(spec, basis[static_cast<std::size_t>(i)]) - params.z_shift;
    out(i) += mult * coeffs(i);
    out(b + i) += mult * coeffs(b + i);
  }
  return out;
}

OperatorMatrix assemble_seeley(const SeeleyParams& params) {
  if (params.K < 0) throw std::invalid_argument("assemble_seeley: K must be nonnegative");
  bool a_nonzero = false;
  for (const auto& [freq, c] : params.a_coeffs) a_nonzero = a_nonzero || c != cplx{};
  if (!a_nonzero) throw std::invalid_argument("assemble_seeley: coefficient a must not vanish identically");

  const int K = params.K;
  const Eigen::Index dim = 2 * K + 1;
  OperatorMatrix out;
  out.entries = CMatrix::Zero(dim, dim);
  out.block_kind = BlockKind::scalar;
  out.block_size = static_cast<std::size_t>(dim);
  out.basis_ref = "fourier1d:K=" + std::to_string(K);

  auto coeff = [](const FourierSeries& s, int f) {
    auto it = s.find(f);
    return it == s.end() ? cplx{} : it->second;
  };
  for (int m = -K; m <= K; ++m) {
    for (int n = -K; n <= K; ++n) {
      const cplx v = coeff(params.a_coeffs, m - n) * cplx{0.0, static_cast<double>(n)} + coeff(params.b_coeffs, m - n);
      out.entries(m + K, n + K) = v;
    }
  }
  return out;
}

}  // namespace fredlab
