#pragma once

#include <vector>

#include "modwave/types.hpp"

namespace modwave {

/// (A + A^H) / 2
CMat hermitian_part(const CMat& A);

struct HermitianEigen {
  RVec values;   // ascending
  CMat vectors;  // columns
};

/// Eigendecomposition of the Hermitian part of A.
HermitianEigen hermitian_eigen(const CMat& A);

/// Nearest (Frobenius) positive semidefinite matrix to the Hermitian part of A.
CMat project_psd(const CMat& A);

double min_eigenvalue(const CMat& A);

/// PSD projection through LAPACK's relatively robust representation solver. Only the eigenpairs
/// on the side of zero that held fewer eigenvalues in the previous call are computed; the other
/// side follows from P(A) = A - P(-A). Keeps its workspace between calls; one per thread.
class PsdProjector {
 public:
  /// Writes the projection of the Hermitian matrix A (lower triangle read) to `out`.
  /// A is overwritten. Returns the rank of the projection.
  int project(CMat& A, CMat& out);
  /// Smallest eigenvalue of the Hermitian matrix A (lower triangle read); A is overwritten.
  double min_eigenvalue(CMat& A);
  /// Forget the side chosen by earlier calls, so results depend only on the calls since.
  void reset() noexcept { negative_side_ = false; }

 private:
  void reserve(int n);
  int n_ = 0;
  bool negative_side_ = false;
  CMat copy_;
  std::vector<cplx> work_, z_;
  std::vector<double> w_, rwork_;
  std::vector<int> iwork_, isuppz_;
};

/// 2-norm condition number from singular values; infinity for a singular matrix.
double condition_number(const CMat& A);

}  // namespace modwave
