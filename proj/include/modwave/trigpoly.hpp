#pragma once

// Vector-valued trigonometric polynomial xi(tau) = sum_{m=-2M}^{2M} c_m e^{i 2 pi tau m}
// with c_m in C^K. For a K x N matrix Q, Q a(tau) is exactly this polynomial with c_m the
// column of Q at index m + 2M.

#include <vector>

#include "modwave/types.hpp"

namespace modwave {

enum class GridMethod { Fft, Direct };

struct LocalMax {
  double tau;
  double value;  // ||xi(tau)||_2^2
};

class TrigPoly {
 public:
  /// `coeffs` is K x N with N = 4M+1.
  explicit TrigPoly(const CMat& coeffs);

  int M() const noexcept { return M_; }
  int n_samples() const noexcept { return static_cast<int>(coeffs_t_.rows()); }
  int dim() const noexcept { return static_cast<int>(coeffs_t_.cols()); }
  /// Highest frequency in tau units, 2M.
  int degree() const noexcept { return 2 * M_; }
  bool is_zero() const { return coeffs_t_.isZero(0.0); }

  CVec eval(double tau) const;

  struct Derivatives {
    CVec d0, d1, d2;
  };
  Derivatives eval_derivatives(double tau) const;

  /// f = ||xi||^2 together with f' and f'' with respect to tau.
  struct Norm2 {
    double f, df, d2f;
  };
  Norm2 norm2(double tau) const;

  /// ||xi^{(p)}(l/L)||_2^2 for l = 0..L-1, p = derivative order in {0,1,2}.
  std::vector<double> norm2_grid(int L, int derivative = 0, GridMethod method = GridMethod::Fft) const;

  /// Maximizer of ||xi||^2 on [lo, hi] (no wrap-around handling needed by callers; the
  /// returned tau is reduced to [0,1)).
  LocalMax refine_max(double lo, double hi) const;

  /// Grid local maxima of ||xi||^2 whose grid value is at least `floor`, each refined
  /// inside its two neighbouring grid cells. Sorted by tau.
  std::vector<LocalMax> local_maxima(int L, double floor) const;

 private:
  CMat coeffs_t_;            // N x K, column k holds the coefficients of component k
  std::vector<double> m_;    // sample index m for each row
  int M_ = 0;

  void phasors(double tau, CVec& p) const;
};

}  // namespace modwave
