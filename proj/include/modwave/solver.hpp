#pragma once

// Atomic-norm regularized least squares
//   min_X 1/2 ||y - B(X)||^2 + lambda ||X||_A
// through its Toeplitz-block SDP
//   min 1/2 ||y - B(X)||^2 + lambda/2 ((1/N) tr Toep(u) + tr T)
//   s.t. [[Toep(u), X^H], [X, T]] >= 0.

#include <vector>

#include "modwave/linalg.hpp"
#include "modwave/model.hpp"

namespace modwave {

/// lambda = 2 eta sigma ||B||_F sqrt(ln N). Any eta > 0 is accepted.
double regularization_lambda(double sigma, const Subspace& subspace, double eta);

struct DenoiseProblem {
  CVec y;
  Subspace subspace;
  double lambda = 0.0;

  void validate() const;
};

struct AdmmConfig {
  double rho = 1.0;
  int max_iters = 20000;
  double eps_abs = 1e-5;
  double eps_rel = 1e-5;
  bool adaptive_rho = true;
  double relaxation = 1.0;  // over-relaxation factor in (0, 2)
  /// The PSD block is iterated as D B D with D = diag(N^-g I_N, N^g I_K), g = balance; X is unchanged.
  double balance = 0.25;
  bool record_history = false;

  void validate() const;
};

struct SdpSolution {
  CMat X_hat;       // K x N
  CVec u_hat;       // Toeplitz generator, u_hat(0) real
  CMat T_hat;       // K x K Hermitian
  CVec x_hat;       // B(X_hat)
  double lambda = 0.0;
  double objective = 0.0;
  double atomic_norm_surrogate = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double feasibility_shift = 0.0;  // diagonal lift applied to restore exact PSD feasibility
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_history;  // filled when AdmmConfig::record_history is set

  /// The (N+K) x (N+K) block [[Toep(u), X^H], [X, T]].
  CMat block() const;
};

/// 1/2 ||y - B(X)||^2 + lambda * surrogate.
double denoise_objective(const DenoiseProblem& problem, const CMat& X, double surrogate);

/// ADMM on the SDP with a consensus PSD block. Owns its workspace; one instance per thread.
class AdmmSolver {
 public:
  explicit AdmmSolver(AdmmConfig config = {});
  /// Never throws on non-convergence: the result carries converged = false and the final residuals.
  SdpSolution solve(const DenoiseProblem& problem);
  const AdmmConfig& config() const noexcept { return config_; }

 private:
  AdmmConfig config_;
  CMat Z_, Lambda_, Theta_, W_, Zprev_;
  PsdProjector projector_;
};

SdpSolution solve_admm(const DenoiseProblem& problem, const AdmmConfig& config = {});

struct ReferenceResult {
  double objective = 0.0;
  CVec x_hat;
  int iterations = 0;
  double duality_gap = 0.0;
  bool coarse_grid_warning = false;
};

/// Group-sparse fit on the grid {g / (grid_factor N)} by accelerated proximal gradient:
///   min 1/2 ||y - sum_g B(H_g a(tau_g)^H)||^2 + lambda sum_g ||H_g||_2.
/// Its optimum upper-bounds the SDP optimum and converges to it as the grid refines.
/// Desk-scale only: N <= 41.
ReferenceResult reference_solver(const DenoiseProblem& problem, int grid_factor);

struct OptimalityReport {
  double cond1_slack = 0.0;  // lambda - ||B*(y - x_hat)||_A^*
  double cond2_gap = 0.0;    // |<X_hat, B*(y - x_hat)>_R - lambda ||X_hat||_A| / (1 + lambda ||X_hat||_A)
};

OptimalityReport check_optimality(const DenoiseProblem& problem, const SdpSolution& solution);

/// Lower bound on the optimal value from the dual-feasible point obtained by scaling y - x_hat
/// into the dual-norm ball of radius lambda.
double dual_objective_bound(const DenoiseProblem& problem, const CVec& x_hat);

struct OracleResult {
  CVec x_hat;
  double mse = 0.0;
};

/// Least squares on the N x KJ design whose column jK+k has entry e^{-i 2 pi m tau_j} conj(b_m(k)).
/// Throws NumericalError when the design is rank deficient.
OracleResult oracle_lsq(const CVec& y, const Subspace& subspace, const std::vector<double>& true_freqs,
                        const CVec& clean);

}  // namespace modwave
