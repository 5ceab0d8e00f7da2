#include <cmath>

#include "modwave/linalg.hpp"
#include "modwave/solver.hpp"

namespace modwave {

OracleResult oracle_lsq(const CVec& y, const Subspace& subspace, const std::vector<double>& true_freqs,
                        const CVec& clean) {
  const int N = subspace.n_samples();
  const int K = subspace.dim();
  const int M = subspace.M();
  const int J = static_cast<int>(true_freqs.size());
  if (y.size() != N || clean.size() != N) throw DimensionError("oracle_lsq: signal length differs from N");
  if (J < 1) throw DomainError("oracle_lsq: need at least one frequency");
  if (N < K * J) throw DomainError("oracle_lsq: need N >= K J");

  CMat design(N, K * J);
  for (int j = 0; j < J; ++j) {
    for (int i = 0; i < N; ++i) {
      const double t = -true_freqs[static_cast<std::size_t>(j)] * sample_of(i, M);
      const double phase = kTwoPi * (t - std::floor(t));
      const cplx e(std::cos(phase), std::sin(phase));
      for (int k = 0; k < K; ++k) design(i, j * K + k) = e * std::conj(subspace.rows()(k, i));
    }
  }

  Eigen::ColPivHouseholderQR<CMat> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < K * J) {
    throw NumericalError("oracle_lsq: design matrix is rank deficient", condition_number(design));
  }
  OracleResult out;
  out.x_hat = design * qr.solve(y);
  out.mse = (out.x_hat - clean).squaredNorm() / N;
  return out;
}

}  // namespace modwave
