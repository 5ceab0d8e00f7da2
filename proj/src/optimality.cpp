#include <cmath>

#include "modwave/atomic.hpp"
#include "modwave/solver.hpp"

namespace modwave {

OptimalityReport check_optimality(const DenoiseProblem& problem, const SdpSolution& solution) {
  problem.validate();
  const CVec residual = problem.y - solution.x_hat;
  const CMat dual_matrix = apply_Badj(problem.subspace, residual);
  OptimalityReport rep;
  rep.cond1_slack = problem.lambda - dual_norm(dual_matrix).value;
  // <X, B*(r)>_R = Re tr(B*(r)^H X)
  const double inner = (dual_matrix.conjugate().cwiseProduct(solution.X_hat)).sum().real();
  const double penalty = problem.lambda * solution.atomic_norm_surrogate;
  rep.cond2_gap = std::abs(inner - penalty) / (1.0 + penalty);
  return rep;
}

double dual_objective_bound(const DenoiseProblem& problem, const CVec& x_hat) {
  problem.validate();
  const CVec theta = problem.y - x_hat;
  const double dn = dual_norm(apply_Badj(problem.subspace, theta)).value;
  // The certified bound would be strictly safe; the refined value is accurate to ~1e-12.
  const double s = dn > problem.lambda ? problem.lambda / dn : 1.0;
  return s * theta.dot(problem.y).real() - 0.5 * s * s * theta.squaredNorm();
}

}  // namespace modwave
