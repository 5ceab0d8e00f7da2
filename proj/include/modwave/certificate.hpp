#pragma once

// Dual polynomials Q(tau) = B*(q) a(tau) = sum_m q(m) e^{i 2 pi m tau} b_m: evaluation,
// frequency localization from a solved residual, and explicit certificate construction
// with the squared Fejer / random matrix kernel.

#include <vector>

#include "modwave/model.hpp"
#include "modwave/solver.hpp"

namespace modwave {

struct DualCertificate {
  CVec q;
  Subspace subspace;

  /// B*(q), the K x N coefficient matrix of Q.
  CMat coefficients() const { return apply_Badj(subspace, q); }
};

CVec eval_Q(const DualCertificate& cert, double tau);

/// q = (y - x_hat) / lambda.
DualCertificate residual_certificate(const DenoiseProblem& problem, const SdpSolution& solution);

struct Peak {
  double tau;
  double strength;  // ||Q(tau)||_2
};

inline constexpr double kDefaultLocalizeThreshold = 0.99;

/// Local maxima of ||Q(tau)||_2 above `threshold`, refined and merged within 0.5/N, sorted by tau.
std::vector<Peak> localize(const DualCertificate& cert, double threshold = kDefaultLocalizeThreshold);

/// g_M(m), m = -2M..2M (index m + 2M), with (1/M) sum_m g_M(m) e^{i 2 pi tau m}
/// = [sin(pi (M+1) tau) / ((M+1) sin(pi tau))]^4.
std::vector<double> squared_fejer_coeffs(int M);

/// Closed form of the squared Fejer kernel; equals 1 at tau = 0.
double squared_fejer_kernel(double tau, int M);

struct CertificateReport {
  struct Support {
    double tau;
    double defect;             // ||Q(tau_j) - h_j||_2
    double derivative_norm;    // ||Q'(tau_j)||_2
  };
  std::vector<Support> support;
  double far_max = 0.0;        // max ||Q(tau)||_2 with wrap distance to every tau_j above 0.16/N
  double far_argmax = 0.0;
  std::vector<bool> near_ok;   // ||Q|| <= 1 and quadratic decay around each tau_j
  std::vector<double> near_exponent;  // fitted exponent of 1 - ||Q(tau)|| against |tau - tau_j|
  double condition_number = 0.0;
};

struct CertificateResult {
  DualCertificate certificate;
  CertificateReport report;
};

/// Interpolating certificate Q(tau) = sum_j K_M(tau - tau_j) alpha_j + K_M'(tau - tau_j) beta_j with
/// Q(tau_j) = h_j and Q'(tau_j) = 0. Throws NumericalError (carrying the condition number) when the
/// interpolation system is singular.
CertificateResult construct_certificate(const GroundTruth& truth, const Subspace& subspace);

/// Near-region half-width 0.16/N.
inline double near_radius(int N) { return 0.16 / N; }

}  // namespace modwave
