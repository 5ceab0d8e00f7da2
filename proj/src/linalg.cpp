#include "modwave/linalg.hpp"

#include <complex>
#include <limits>
#include <mutex>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#include <cblas.h>

// Present when LAPACK comes from OpenBLAS; its own thread pool only oversubscribes the
// sweep workers.
extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace modwave {

CMat hermitian_part(const CMat& A) { return (A + A.adjoint()) * 0.5; }

HermitianEigen hermitian_eigen(const CMat& A) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(A));
  if (es.info() != Eigen::Success) throw NumericalError("hermitian_eigen: decomposition did not converge", 0.0);
  return {es.eigenvalues(), es.eigenvectors()};
}

CMat project_psd(const CMat& A) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(A));
  if (es.info() != Eigen::Success) throw NumericalError("project_psd: decomposition did not converge", 0.0);
  const RVec& w = es.eigenvalues();
  const Eigen::Index n = w.size();
  Eigen::Index first = 0;
  while (first < n && w[first] <= 0.0) ++first;
  const Eigen::Index r = n - first;
  if (r == 0) return CMat::Zero(n, n);
  const auto V = es.eigenvectors().rightCols(r);
  const CMat scaled = V * w.tail(r).cwiseSqrt().asDiagonal();
  return scaled * scaled.adjoint();
}

double min_eigenvalue(const CMat& A) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(A), Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

static_assert(sizeof(lapack_int) == sizeof(int), "LAPACK built with 64-bit integers");

namespace {

void single_threaded_blas() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (openblas_set_num_threads) openblas_set_num_threads(1);
  });
}

}  // namespace

void PsdProjector::reserve(int n) {
  if (n == n_) return;
  single_threaded_blas();
  n_ = n;
  w_.assign(static_cast<std::size_t>(n), 0.0);
  z_.assign(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0));
  isuppz_.assign(2 * static_cast<std::size_t>(n), 0);
  cplx wq;
  double rq;
  lapack_int iq, m = 0;
  const lapack_int info = LAPACKE_zheevr_work(LAPACK_COL_MAJOR, 'V', 'A', 'L', n, nullptr, n, 0.0, 0.0, 0, 0, 0.0, &m,
                                              nullptr, nullptr, n, nullptr, &wq, -1, &rq, -1, &iq, -1);
  if (info != 0) throw NumericalError("PsdProjector: workspace query failed", 0.0);
  work_.assign(static_cast<std::size_t>(wq.real()) + 1, cplx(0.0, 0.0));
  rwork_.assign(static_cast<std::size_t>(rq) + 1, 0.0);
  iwork_.assign(static_cast<std::size_t>(iq) + 1, 0);
}

int PsdProjector::project(CMat& A, CMat& out) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw DimensionError("PsdProjector: matrix must be square");
  reserve(n);
  const bool neg = negative_side_;
  if (neg) copy_ = A.triangularView<Eigen::Lower>();
  const double big = std::numeric_limits<double>::max();
  lapack_int m = 0;
  const lapack_int info = LAPACKE_zheevr_work(
      LAPACK_COL_MAJOR, 'V', 'V', 'L', n, A.data(), n, neg ? -big : 0.0, neg ? 0.0 : big, 0, 0, 0.0, &m, w_.data(),
      z_.data(), n, isuppz_.data(), work_.data(), static_cast<lapack_int>(work_.size()), rwork_.data(),
      static_cast<lapack_int>(rwork_.size()), iwork_.data(), static_cast<lapack_int>(iwork_.size()));
  if (info != 0) throw NumericalError("PsdProjector: zheevr failed with info " + std::to_string(info), 0.0);
  const int rank = neg ? n - static_cast<int>(m) : static_cast<int>(m);
  negative_side_ = 2 * rank > n;
  out.resize(n, n);
  Eigen::Map<CMat> V(z_.data(), n, m);
  const Eigen::Map<RVec> w(w_.data(), m);
  // Lower triangle via a Hermitian rank-m update, then mirrored.
  if (!neg) {
    if (m == 0) {
      out.setZero();
      return 0;
    }
    V = V * w.cwiseSqrt().asDiagonal();
    cblas_zherk(CblasColMajor, CblasLower, CblasNoTrans, n, m, 1.0, V.data(), n, 0.0, out.data(), n);
  } else {
    out = copy_;
    if (m > 0) {
      V = V * (-w).cwiseSqrt().asDiagonal();
      cblas_zherk(CblasColMajor, CblasLower, CblasNoTrans, n, m, 1.0, V.data(), n, 1.0, out.data(), n);
    }
  }
  for (int c = 1; c < n; ++c)
    for (int r = 0; r < c; ++r) out(r, c) = std::conj(out(c, r));
  for (int i = 0; i < n; ++i) out(i, i) = out(i, i).real();
  return rank;
}

double PsdProjector::min_eigenvalue(CMat& A) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw DimensionError("PsdProjector: matrix must be square");
  reserve(n);
  lapack_int m = 0;
  const lapack_int info = LAPACKE_zheevr_work(
      LAPACK_COL_MAJOR, 'N', 'I', 'L', n, A.data(), n, 0.0, 0.0, 1, 1, 0.0, &m, w_.data(), z_.data(), n, isuppz_.data(),
      work_.data(), static_cast<lapack_int>(work_.size()), rwork_.data(), static_cast<lapack_int>(rwork_.size()),
      iwork_.data(), static_cast<lapack_int>(iwork_.size()));
  if (info != 0 || m < 1) throw NumericalError("PsdProjector: zheevr failed with info " + std::to_string(info), 0.0);
  return w_[0];
}

double condition_number(const CMat& A) {
  Eigen::JacobiSVD<CMat> svd(A);
  const RVec& s = svd.singularValues();
  if (s.size() == 0) return 0.0;
  const double smin = s[s.size() - 1];
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / smin;
}

}  // namespace modwave
