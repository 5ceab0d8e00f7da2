#include "modwave/certificate.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "modwave/atomic.hpp"
#include "modwave/linalg.hpp"
#include "modwave/trigpoly.hpp"

namespace modwave {

CVec eval_Q(const DualCertificate& cert, double tau) {
  if (cert.q.size() != cert.subspace.n_samples()) throw DimensionError("eval_Q: q length differs from N");
  return TrigPoly(cert.coefficients()).eval(tau);
}

DualCertificate residual_certificate(const DenoiseProblem& problem, const SdpSolution& solution) {
  if (!(problem.lambda > 0.0)) throw DomainError("residual_certificate: lambda must be positive");
  if (solution.x_hat.size() != problem.y.size()) throw DimensionError("residual_certificate: x_hat length differs from y");
  return DualCertificate{(problem.y - solution.x_hat) / problem.lambda, problem.subspace};
}

std::vector<Peak> localize(const DualCertificate& cert, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("localize: threshold must lie in (0,1)");
  const int N = cert.subspace.n_samples();
  if (cert.q.size() != N) throw DimensionError("localize: q length differs from N");
  const TrigPoly poly(cert.coefficients());
  if (poly.is_zero()) return {};

  const int L = std::max(dual_norm_grid_size(N), 16 * N);
  // A peak of height p has grid neighbours of at least p (1 - 4 pi N / L) in squared norm.
  const double floor = threshold * threshold * std::max(0.0, 1.0 - 4.0 * M_PI * N / L);
  std::vector<Peak> cand;
  for (const auto& lm : poly.local_maxima(L, floor)) {
    const double s = std::sqrt(lm.value);
    if (s >= threshold) cand.push_back({lm.tau, s});
  }

  std::sort(cand.begin(), cand.end(), [](const Peak& a, const Peak& b) {
    return a.strength != b.strength ? a.strength > b.strength : a.tau < b.tau;
  });
  const double radius = 0.5 / N;
  std::vector<Peak> kept;
  for (const auto& p : cand) {
    bool close = false;
    for (const auto& k : kept) close = close || wrap_distance(p.tau, k.tau) < radius;
    if (!close) kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end(), [](const Peak& a, const Peak& b) { return a.tau < b.tau; });
  return kept;
}

std::vector<double> squared_fejer_coeffs(int M) {
  if (M < 1) throw DomainError("squared_fejer_coeffs: M must be positive");
  // Fejer kernel [sin(pi (M+1) t) / ((M+1) sin(pi t))]^2 has coefficients (M+1-|k|)/(M+1)^2, |k| <= M.
  const double s = static_cast<double>(M + 1);
  std::vector<double> f(static_cast<std::size_t>(2 * M + 1));
  for (int k = -M; k <= M; ++k) f[static_cast<std::size_t>(k + M)] = (s - std::abs(k)) / (s * s);
  std::vector<double> g(static_cast<std::size_t>(4 * M + 1), 0.0);
  for (int a = 0; a <= 2 * M; ++a)
    for (int b = 0; b <= 2 * M; ++b) g[static_cast<std::size_t>(a + b)] += f[static_cast<std::size_t>(a)] * f[static_cast<std::size_t>(b)];
  for (double& v : g) v *= M;
  return g;
}

double squared_fejer_kernel(double tau, int M) {
  const double s = std::sin(M_PI * tau);
  if (std::abs(s) < 1e-300) return 1.0;
  const double r = std::sin(M_PI * (M + 1) * tau) / ((M + 1) * s);
  return r * r * r * r;
}

namespace {

// (1/M) sum_m g(m) (i 2 pi m)^p e^{i 2 pi d m} b_m b_m^H
CMat kernel_matrix(const Subspace& sub, const std::vector<double>& g, double d, int p) {
  const int N = sub.n_samples();
  const int M = sub.M();
  CVec w(N);
  for (int i = 0; i < N; ++i) {
    const int m = sample_of(i, M);
    const double t = d * m;
    const double phase = kTwoPi * (t - std::floor(t));
    cplx c = cplx(std::cos(phase), std::sin(phase)) * (g[static_cast<std::size_t>(i)] / M);
    for (int k = 0; k < p; ++k) c *= cplx(0.0, kTwoPi * m);
    w[i] = c;
  }
  return sub.rows() * w.asDiagonal() * sub.rows().adjoint();
}

double min_distance_to(const std::vector<double>& freqs, double tau) {
  double d = 1.0;
  for (double f : freqs) d = std::min(d, wrap_distance(tau, f));
  return d;
}

}  // namespace

CertificateResult construct_certificate(const GroundTruth& truth, const Subspace& subspace) {
  const int K = subspace.dim();
  const int N = subspace.n_samples();
  const int M = subspace.M();
  truth.validate(K);
  const int J = static_cast<int>(truth.size());

  const auto g = squared_fejer_coeffs(M);
  double k2 = 0.0;
  for (int i = 0; i < N; ++i) {
    const double w = kTwoPi * sample_of(i, M);
    k2 += g[static_cast<std::size_t>(i)] * w * w / M;
  }
  const double kappa = std::sqrt(k2);

  // Unknowns [alpha; kappa beta]; derivative rows divided by kappa.
  const int n = 2 * J * K;
  CMat A(n, n);
  CVec rhs = CVec::Zero(n);
  for (int i = 0; i < J; ++i) {
    rhs.segment(i * K, K) = truth.waveform_coeffs[static_cast<std::size_t>(i)];
    for (int j = 0; j < J; ++j) {
      const double d = truth.freqs[static_cast<std::size_t>(i)] - truth.freqs[static_cast<std::size_t>(j)];
      const CMat K0 = kernel_matrix(subspace, g, d, 0);
      const CMat K1 = kernel_matrix(subspace, g, d, 1);
      const CMat K2 = kernel_matrix(subspace, g, d, 2);
      A.block(i * K, j * K, K, K) = K0;
      A.block(i * K, (J + j) * K, K, K) = K1 / kappa;
      A.block((J + i) * K, j * K, K, K) = K1 / kappa;
      A.block((J + i) * K, (J + j) * K, K, K) = K2 / (kappa * kappa);
    }
  }

  const double cond = condition_number(A);
  Eigen::FullPivLU<CMat> lu(A);
  if (lu.rank() < n || !(cond < 1e12)) {
    throw NumericalError("construct_certificate: interpolation system is singular", cond);
  }
  const CVec sol = lu.solve(rhs);

  CVec q(N);
  for (int i = 0; i < N; ++i) {
    const int m = sample_of(i, M);
    const auto b = subspace.row(i);
    cplx acc(0.0, 0.0);
    for (int j = 0; j < J; ++j) {
      const double t = -truth.freqs[static_cast<std::size_t>(j)] * m;
      const double phase = kTwoPi * (t - std::floor(t));
      const cplx e(std::cos(phase), std::sin(phase));
      const cplx ba = b.dot(sol.segment(j * K, K));
      const cplx bb = b.dot(sol.segment((J + j) * K, K)) / kappa;
      acc += e * (ba + cplx(0.0, kTwoPi * m) * bb);
    }
    q[i] = acc * (g[static_cast<std::size_t>(i)] / M);
  }

  CertificateResult res{DualCertificate{q, subspace}, {}};
  CertificateReport& rep = res.report;
  rep.condition_number = cond;
  const TrigPoly poly(res.certificate.coefficients());

  for (int j = 0; j < J; ++j) {
    const double tau = truth.freqs[static_cast<std::size_t>(j)];
    const auto d = poly.eval_derivatives(tau);
    rep.support.push_back({tau, (d.d0 - truth.waveform_coeffs[static_cast<std::size_t>(j)]).norm(), d.d1.norm()});
  }

  // Far region scan: fine grid, refined local maxima, and the region boundaries.
  const double r = near_radius(N);
  const int L = std::max(64 * N, dual_norm_grid_size(N));
  const auto grid = poly.norm2_grid(L);
  double best = -1.0, best_tau = 0.0;
  auto consider = [&](double tau, double f) {
    if (min_distance_to(truth.freqs, tau) <= r) return;
    if (f > best || (f == best && tau < best_tau)) {
      best = f;
      best_tau = tau;
    }
  };
  for (int l = 0; l < L; ++l) consider(static_cast<double>(l) / L, grid[static_cast<std::size_t>(l)]);
  for (const auto& lm : poly.local_maxima(L, 0.5 * std::max(best, 0.0))) consider(lm.tau, lm.value);
  for (double f : truth.freqs) {
    for (double s : {-1.0, 1.0}) {
      double t = f + s * r * (1.0 + 1e-12);
      t -= std::floor(t);
      consider(t, poly.eval(t).squaredNorm());
    }
  }
  rep.far_max = std::sqrt(std::max(best, 0.0));
  rep.far_argmax = best_tau;

  // Near region: ||Q|| <= 1 and a log-log fit of 1 - ||Q|| against distance.
  const int samples = 40;
  for (int j = 0; j < J; ++j) {
    const double f0 = truth.freqs[static_cast<std::size_t>(j)];
    bool ok = true;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (double s : {-1.0, 1.0}) {
      for (int k = 0; k < samples; ++k) {
        const double dist = r * std::pow(10.0, -2.0 * (1.0 - static_cast<double>(k) / (samples - 1)));
        double t = f0 + s * dist;
        t -= std::floor(t);
        const double f = poly.eval(t).squaredNorm();
        const double gap = (1.0 - f) / (1.0 + std::sqrt(f));
        if (!(gap > 0.0)) {
          ok = false;
          continue;
        }
        const double x = std::log(dist), y = std::log(gap);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
      }
    }
    double slope = 0.0;
    if (cnt >= 2) slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    ok = ok && std::abs(slope - 2.0) <= 0.2;
    rep.near_ok.push_back(ok);
    rep.near_exponent.push_back(slope);
  }
  return res;
}

}  // namespace modwave
