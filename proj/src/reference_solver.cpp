#include <algorithm>
#include <cmath>

#include "modwave/solver.hpp"

namespace modwave {

namespace {

struct GroupLasso {
  CMat A;  // N x (G K)
  int groups = 0;
  int K = 0;
  double lambda = 0.0;

  double penalty(const CVec& v) const {
    double s = 0.0;
    for (int g = 0; g < groups; ++g) s += v.segment(g * K, K).norm();
    return s;
  }
  double primal(const CVec& y, const CVec& v) const {
    return 0.5 * (y - A * v).squaredNorm() + lambda * penalty(v);
  }
  double dual(const CVec& y, const CVec& v) const {
    const CVec theta = y - A * v;
    const CVec corr = A.adjoint() * theta;
    double worst = 0.0;
    for (int g = 0; g < groups; ++g) worst = std::max(worst, corr.segment(g * K, K).norm());
    const double s = worst > lambda ? lambda / worst : 1.0;
    return s * theta.dot(y).real() - 0.5 * s * s * theta.squaredNorm();
  }
  void shrink(CVec& v, double t) const {
    for (int g = 0; g < groups; ++g) {
      auto seg = v.segment(g * K, K);
      const double nrm = seg.norm();
      if (nrm <= t) seg.setZero();
      else seg *= (1.0 - t / nrm);
    }
  }
};

}  // namespace

ReferenceResult reference_solver(const DenoiseProblem& problem, int grid_factor) {
  problem.validate();
  if (grid_factor < 1) throw DomainError("reference_solver: grid_factor must be positive");
  const Subspace& sub = problem.subspace;
  const int N = sub.n_samples();
  if (N > 41) throw DomainError("reference_solver: restricted to N <= 41");
  const int K = sub.dim();
  const int M = sub.M();

  GroupLasso gl;
  gl.groups = grid_factor * N;
  gl.K = K;
  gl.lambda = problem.lambda;
  gl.A.resize(N, static_cast<Eigen::Index>(gl.groups) * K);
  for (int g = 0; g < gl.groups; ++g) {
    const double tau = static_cast<double>(g) / gl.groups;
    for (int i = 0; i < N; ++i) {
      const double t = -tau * sample_of(i, M);
      const double phase = kTwoPi * (t - std::floor(t));
      const cplx e(std::cos(phase), std::sin(phase));
      for (int k = 0; k < K; ++k) gl.A(i, g * K + k) = e * std::conj(sub.rows()(k, i));
    }
  }

  ReferenceResult res;
  res.coarse_grid_warning = grid_factor < 8;
  const CVec& y = problem.y;
  if (y.isZero(0.0)) {
    res.x_hat = CVec::Zero(N);
    return res;
  }

  Eigen::SelfAdjointEigenSolver<CMat> es(gl.A * gl.A.adjoint(), Eigen::EigenvaluesOnly);
  const double lip = es.eigenvalues().maxCoeff();
  const double step = 1.0 / lip;

  const Eigen::Index dim = gl.A.cols();
  CVec v = CVec::Zero(dim), v_prev = v, w = v;
  double t = 1.0;
  double obj_prev = gl.primal(y, v);
  const int max_iters = 400000;
  int it = 0;
  for (it = 1; it <= max_iters; ++it) {
    CVec grad = gl.A.adjoint() * (gl.A * w - y);
    v_prev.swap(v);
    v = w - step * grad;
    gl.shrink(v, step * gl.lambda);
    const double obj = gl.primal(y, v);
    // Function-value restart keeps the accelerated iteration monotone.
    if (obj > obj_prev) {
      t = 1.0;
      w = v_prev;
      v = v_prev;
      continue;
    }
    obj_prev = obj;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    w = v + ((t - 1.0) / t_next) * (v - v_prev);
    t = t_next;
    if (it % 50 == 0) {
      const double gap = obj - gl.dual(y, v);
      if (gap <= 1e-6 * std::max(obj, 1e-300)) break;
    }
  }
  res.iterations = std::min(it, max_iters);
  res.objective = gl.primal(y, v);
  res.duality_gap = res.objective - gl.dual(y, v);
  res.x_hat = gl.A * v;
  return res;
}

}  // namespace modwave
