#include <algorithm>
#include <cmath>

#include "modwave/atomic.hpp"
#include "modwave/linalg.hpp"
#include "modwave/solver.hpp"

namespace modwave {

double regularization_lambda(double sigma, const Subspace& subspace, double eta) {
  if (!(sigma >= 0.0)) throw DomainError("regularization_lambda: sigma must be nonnegative");
  if (!(eta > 0.0)) throw DomainError("regularization_lambda: eta must be positive");
  return 2.0 * eta * sigma * subspace.frobenius_norm() * std::sqrt(std::log(static_cast<double>(subspace.n_samples())));
}

void DenoiseProblem::validate() const {
  if (y.size() != subspace.n_samples()) throw DimensionError("DenoiseProblem: y length differs from N");
  if (!(lambda > 0.0)) throw DomainError("DenoiseProblem: lambda must be positive");
}

void AdmmConfig::validate() const {
  if (!(rho > 0.0)) throw DomainError("AdmmConfig: rho must be positive");
  if (max_iters < 1) throw DomainError("AdmmConfig: max_iters must be positive");
  if (!(eps_abs > 0.0) || !(eps_rel > 0.0)) throw DomainError("AdmmConfig: tolerances must be positive");
  if (!(relaxation > 0.0 && relaxation < 2.0)) throw DomainError("AdmmConfig: relaxation must lie in (0,2)");
}

CMat SdpSolution::block() const {
  const Eigen::Index N = X_hat.cols();
  const Eigen::Index K = X_hat.rows();
  CMat Bk(N + K, N + K);
  Bk.topLeftCorner(N, N) = build_toeplitz(u_hat);
  Bk.topRightCorner(N, K) = X_hat.adjoint();
  Bk.bottomLeftCorner(K, N) = X_hat;
  Bk.bottomRightCorner(K, K) = T_hat;
  return Bk;
}

double denoise_objective(const DenoiseProblem& problem, const CMat& X, double surrogate) {
  return 0.5 * (problem.y - apply_B(problem.subspace, X)).squaredNorm() + problem.lambda * surrogate;
}

AdmmSolver::AdmmSolver(AdmmConfig config) : config_(config) { config_.validate(); }

namespace {

// Fills the Toeplitz part of `theta` from u.
void write_toeplitz(CMat& theta, const CVec& u) {
  const Eigen::Index N = u.size();
  for (Eigen::Index c = 0; c < N; ++c) {
    theta(c, c) = u[0];
    for (Eigen::Index r = c + 1; r < N; ++r) {
      theta(r, c) = u[r - c];
      theta(c, r) = std::conj(u[r - c]);
    }
  }
}

}  // namespace

SdpSolution AdmmSolver::solve(const DenoiseProblem& problem) {
  problem.validate();
  const Subspace& sub = problem.subspace;
  const int N = sub.n_samples();
  const int K = sub.dim();
  const int n = N + K;
  const double lambda = problem.lambda;
  const CMat& Bh = sub.rows();
  const RVec bnorm2 = sub.row_norms_squared();
  const CVec& y = problem.y;

  projector_.reset();
  Z_.setZero(n, n);
  Lambda_.setZero(n, n);
  Theta_.setZero(n, n);
  W_.resize(n, n);
  Zprev_.resize(n, n);

  CVec u(N);
  CMat X(K, N);
  CMat T(K, K);

  // Congruence scaling of the block: Toeplitz part by su, T by st, su * st = 1.
  const double su = std::pow(static_cast<double>(N), -2.0 * config_.balance);
  const double st = 1.0 / su;

  double rho = config_.rho;
  SdpSolution sol;
  sol.lambda = lambda;
  double r_norm = 0.0, s_norm = 0.0;
  int it = 0;
  bool converged = false;

  for (it = 1; it <= config_.max_iters; ++it) {
    W_ = Z_ - Lambda_ / rho;

    // u: least-squares Toeplitz fit of W's top-left block along diagonals, with the
    // trace penalty lambda/(2N) entering through u(0).
    for (int k = 0; k < N; ++k) {
      cplx s(0.0, 0.0);
      for (int r = k; r < N; ++r) s += W_(r, r - k) + std::conj(W_(r - k, r));
      u[k] = s / (2.0 * (N - k));
    }
    u[0] = cplx(u[0].real() - lambda / (2.0 * N * rho * su), 0.0);

    // X: per column (b_m b_m^H + 2 rho I) x_m = b_m y_m + 2 rho s_m, solved by Sherman-Morrison.
    for (int m = 0; m < N; ++m) {
      const auto b = Bh.col(m);
      CVec rhs = b * y[m] + rho * (W_.block(N, m, K, 1) + W_.block(m, N, 1, K).adjoint());
      const cplx bh_r = b.dot(rhs);
      X.col(m) = (rhs - b * (bh_r / (2.0 * rho + bnorm2[m]))) / (2.0 * rho);
    }

    // T: shifted Hermitian part of W's bottom-right block.
    T = 0.5 * (W_.bottomRightCorner(K, K) + W_.bottomRightCorner(K, K).adjoint());
    T.diagonal().array() -= lambda / (2.0 * rho * st);

    write_toeplitz(Theta_, u);
    Theta_.bottomLeftCorner(K, N) = X;
    Theta_.topRightCorner(N, K) = X.adjoint();
    Theta_.bottomRightCorner(K, K) = T;

    // Z: projection of the (relaxed) Theta + Lambda/rho onto the PSD cone.
    Zprev_.swap(Z_);
    const double alpha = config_.relaxation;
    if (alpha != 1.0) W_ = alpha * Theta_ + (1.0 - alpha) * Zprev_ + Lambda_ / rho;
    else W_ = Theta_ + Lambda_ / rho;
    projector_.project(W_, Z_);

    if (alpha != 1.0) Lambda_ += rho * (alpha * Theta_ + (1.0 - alpha) * Zprev_ - Z_);
    W_ = Theta_ - Z_;
    if (alpha == 1.0) Lambda_ += rho * W_;

    r_norm = W_.norm();
    s_norm = rho * (Z_ - Zprev_).norm();

    if (config_.record_history) {
      const double surrogate = 0.5 * (u[0].real() / su + T.trace().real() / st);
      sol.objective_history.push_back(denoise_objective(problem, X, surrogate));
    }

    const double eps_pri = n * config_.eps_abs + config_.eps_rel * std::max(Theta_.norm(), Z_.norm());
    const double eps_dual = n * config_.eps_abs + config_.eps_rel * Lambda_.norm();
    if (r_norm <= eps_pri && s_norm <= eps_dual) {
      converged = true;
      break;
    }
    if (config_.adaptive_rho) {
      if (r_norm > 10.0 * s_norm) rho *= 2.0;
      else if (s_norm > 10.0 * r_norm) rho /= 2.0;
    }
  }

  // Lift the diagonal so the returned block is exactly feasible; the surrogate is then an
  // upper bound on the atomic norm of X_hat.
  write_toeplitz(Theta_, u);
  Theta_.bottomLeftCorner(K, N) = X;
  Theta_.topRightCorner(N, K) = X.adjoint();
  Theta_.bottomRightCorner(K, K) = T;
  const double shift = std::max(0.0, -projector_.min_eigenvalue(Theta_));
  if (shift > 0.0) {
    u[0] += shift;
    T.diagonal().array() += shift;
  }
  u /= su;
  T /= st;

  sol.X_hat = X;
  sol.u_hat = u;
  sol.T_hat = T;
  sol.x_hat = apply_B(sub, X);
  sol.atomic_norm_surrogate = atomic_norm_value(u, T);
  sol.objective = denoise_objective(problem, X, sol.atomic_norm_surrogate);
  sol.primal_residual = r_norm;
  sol.dual_residual = s_norm;
  sol.feasibility_shift = shift;
  sol.iterations = std::min(it, config_.max_iters);
  sol.converged = converged;
  return sol;
}

SdpSolution solve_admm(const DenoiseProblem& problem, const AdmmConfig& config) {
  AdmmSolver solver(config);
  return solver.solve(problem);
}

}  // namespace modwave
