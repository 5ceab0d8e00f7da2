#include "modwave/atomic.hpp"

#include <algorithm>
#include <cmath>

#include "modwave/trigpoly.hpp"

namespace modwave {

CMat build_toeplitz(const CVec& u) {
  if (u.size() < 1) throw DimensionError("build_toeplitz: empty generator");
  if (u[0].imag() != 0.0) throw DomainError("build_toeplitz: u(0) must be real");
  const Eigen::Index n = u.size();
  CMat T(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = c; r < n; ++r) {
      T(r, c) = u[r - c];
      T(c, r) = std::conj(u[r - c]);
    }
  }
  return T;
}

double atomic_norm_value(const CVec& u, const CMat& T) {
  if (u.size() < 1) throw DimensionError("atomic_norm_value: empty generator");
  return 0.5 * (u[0].real() + T.trace().real());
}

int dual_norm_grid_size(int N) {
  const double n = static_cast<double>(N);
  return static_cast<int>(std::ceil(2.0 * kTwoPi * n * std::log(n)));
}

DualNormResult dual_norm(const CMat& Q) {
  const TrigPoly poly(Q);
  if (poly.is_zero()) return {0.0, 0.0};
  const int N = poly.n_samples();
  const int L = dual_norm_grid_size(N);
  const auto grid = poly.norm2_grid(L);
  const auto top = std::max_element(grid.begin(), grid.end());
  const double gmax = *top;

  // Any maximizer lies within half a cell of a grid point whose value is at least
  // (1 - 2 pi N / L) of the grid maximum, so refining those local maxima suffices.
  const double floor = gmax * (1.0 - kTwoPi * N / L);
  auto candidates = poly.local_maxima(L, floor);
  if (candidates.empty()) {
    const double tau = static_cast<double>(std::distance(grid.begin(), top)) / L;
    candidates.push_back({tau, gmax});
  }
  LocalMax best = candidates.front();
  for (const auto& c : candidates) {
    if (c.value > best.value * (1.0 + 1e-14)) best = c;
    else if (c.value >= best.value * (1.0 - 1e-14) && c.tau < best.tau) best = c;
  }
  return {std::sqrt(std::max(best.value, gmax)), best.value >= gmax ? best.tau
                                                                    : static_cast<double>(std::distance(grid.begin(), top)) / L};
}

double certified_dual_norm_bound(const CMat& Q, int L) {
  const TrigPoly poly(Q);
  const int N = poly.n_samples();
  const int min_l = static_cast<int>(std::ceil(2.0 * kTwoPi * N)) + 1;
  if (L < min_l) throw DomainError("certified_dual_norm_bound: L must be at least ceil(4 pi N) + 1");
  const auto grid = poly.norm2_grid(L);
  const double gmax = *std::max_element(grid.begin(), grid.end());
  return std::sqrt(gmax / (1.0 - kTwoPi * N / L));
}

BernsteinRatios bernstein_check(const CMat& Q) {
  const TrigPoly poly(Q);
  const double D = kTwoPi * poly.degree();
  if (poly.is_zero()) return {0.0, 0.0, D};
  const double sup0 = dual_norm(Q).value;
  const int L = 64 * poly.n_samples();
  const auto g1 = poly.norm2_grid(L, 1);
  const auto g2 = poly.norm2_grid(L, 2);
  const double sup1 = std::sqrt(*std::max_element(g1.begin(), g1.end()));
  const double sup2 = std::sqrt(*std::max_element(g2.begin(), g2.end()));
  return {sup1 / (D * sup0), sup2 / (D * D * sup0), D};
}

}  // namespace modwave
