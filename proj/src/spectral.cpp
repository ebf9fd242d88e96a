#include "fredlab/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <sstream>

extern "C" void openblas_set_num_threads(int);

namespace fredlab {

namespace {

lapack_complex_double* lp(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

[[noreturn]] void fail(const char* routine, lapack_int info, const CMatrix& m) {
  const auto fp = matrix_fingerprint(m);
  std::ostringstream os;
  os << routine << " failed with info=" << info << " on " << m.rows() << "x" << m.cols()
     << " matrix (fingerprint 0x" << std::hex << fp << ")";
  throw SpectralError(os.str(), fp);
}

}  // namespace

void pin_backend_threads() {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
}

std::uint64_t matrix_fingerprint(const CMatrix& m) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  const std::int64_t dims[2] = {m.rows(), m.cols()};
  mix(dims, sizeof(dims));
  mix(m.data(), static_cast<std::size_t>(m.size()) * sizeof(cplx));
  return h;
}

SpectrumResult eigenvalues(const CMatrix& m) {
  pin_backend_threads();
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
  if (!m.allFinite()) throw std::invalid_argument("eigenvalues: matrix has non-finite entries");
  const auto start = std::chrono::steady_clock::now();
  SpectrumResult out;
  out.dim = m.rows();
  if (m.rows() == 0) return out;

  CMatrix work = m;
  std::vector<cplx> w(static_cast<std::size_t>(m.rows()));
  const lapack_int n = static_cast<lapack_int>(m.rows());
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, lp(work.data()), n, lp(w.data()), nullptr, 1, nullptr, 1);
  if (info != 0) fail("zgeev", info, m);
  out.eigenvalues = std::move(w);
  out.wall_time = std::chrono::steady_clock::now() - start;
  return out;
}

SingularSpectrum singular_values(const CMatrix& m, bool with_vectors) {
  pin_backend_threads();
  if (!m.allFinite()) throw std::invalid_argument("singular_values: matrix has non-finite entries");
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int k = std::min(rows, cols);
  SingularSpectrum out;
  out.values.resize(k);
  if (k == 0) {
    if (with_vectors) {
      out.left_vectors = CMatrix::Identity(rows, rows);
      out.right_vectors = CMatrix::Identity(cols, cols);
    }
    return out;
  }

  CMatrix work = m;
  if (!with_vectors) {
    lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, lp(work.data()), rows, out.values.data(),
                                     nullptr, 1, nullptr, 1);
    if (info > 0) {
      work = m;
      std::vector<double> superb(static_cast<std::size_t>(k));
      info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', rows, cols, lp(work.data()), rows, out.values.data(), nullptr,
                            1, nullptr, 1, superb.data());
    }
    if (info != 0) fail("zgesdd/zgesvd", info, m);
    return out;
  }

  CMatrix u(rows, rows);
  CMatrix vt(cols, cols);
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', rows, cols, lp(work.data()), rows, out.values.data(),
                                   lp(u.data()), rows, lp(vt.data()), cols);
  if (info > 0) {
    work = m;
    std::vector<double> superb(static_cast<std::size_t>(k));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'A', 'A', rows, cols, lp(work.data()), rows, out.values.data(),
                          lp(u.data()), rows, lp(vt.data()), cols, superb.data());
  }
  if (info != 0) fail("zgesdd/zgesvd", info, m);
  out.left_vectors = std::move(u);
  out.right_vectors = vt.adjoint();
  return out;
}

double smallest_singular_value(const CMatrix& m) { return singular_values(m).smallest(); }

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m).largest();
}

std::size_t count_in_disk(const SpectrumResult& s, cplx center, double radius) {
  if (radius < 0.0) throw std::invalid_argument("count_in_disk: radius must be nonnegative");
  return static_cast<std::size_t>(std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(),
                                                [&](cplx l) { return std::abs(l - center) <= radius; }));
}

double min_distance(const SpectrumResult& s, cplx center) {
  double best = std::numeric_limits<double>::infinity();
  for (const cplx l : s.eigenvalues) best = std::min(best, std::abs(l - center));
  return best;
}

double log_abs_det(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("log_abs_det: matrix must be square");
  if (m.rows() == 0) return 0.0;
  const Eigen::PartialPivLU<CMatrix> lu(m);
  const CMatrix& f = lu.matrixLU();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < f.rows(); ++i) sum += std::log(std::abs(f(i, i)));
  return sum;
}

}  // namespace fredlab
