#pragma once

// Atomic-norm machinery for the atom set {h a(tau)^H : ||h|| = 1}: Toeplitz generators,
// the SDP surrogate value, and the dual norm sup_tau ||Q a(tau)||_2.

#include "modwave/types.hpp"

namespace modwave {

/// Hermitian Toeplitz matrix with first column u; entry (r,c) = u(r-c) for r >= c.
/// Throws DomainError when u(0) is not real.
CMat build_toeplitz(const CVec& u);

/// 1/2 ((1/N) tr Toep(u) + tr T).
double atomic_norm_value(const CVec& u, const CMat& T);

/// Grid size ceil(4 pi N ln N) used for dual-norm evaluation.
int dual_norm_grid_size(int N);

struct DualNormResult {
  double value = 0.0;
  double argmax_tau = 0.0;
};

/// sup over tau in [0,1) of ||Q a(tau)||_2 by FFT grid search plus local refinement.
/// Ties are broken towards the smallest tau.
DualNormResult dual_norm(const CMat& Q);

/// Guaranteed upper bound ((1 - 2 pi N / L)^{-1} max_l ||Q a(l/L)||^2)^{1/2}.
/// Requires L >= ceil(4 pi N) + 1.
double certified_dual_norm_bound(const CMat& Q, int L);

struct BernsteinRatios {
  double first = 0.0;   // sup||xi'|| / (D sup||xi||)
  double second = 0.0;  // sup||xi''|| / (D^2 sup||xi||)
  double constant = 0.0;  // D = 2 pi (2M), the Bernstein constant in tau units
};

/// Derivative-to-value ratios of xi = Q a(tau), normalized by the sharp Bernstein constant.
/// Both ratios are at most one; Q = 0 gives (0, 0).
BernsteinRatios bernstein_check(const CMat& Q);

}  // namespace modwave
