#pragma once

// Signal model: samples x(m) = sum_j c_j e^{-i 2 pi m tau_j} b_m^H h_j for m = -2M..2M.
// Sample m lives at array index m + 2M throughout the library.

#include <cstdint>
#include <vector>

#include "modwave/types.hpp"

namespace modwave {

/// Known waveform subspace. Holds B^H as a K x N matrix so that column n is b_m with m = n - 2M.
class Subspace {
 public:
  Subspace() = default;
  /// `rows` is K x N with column n equal to b_{n-2M}. N must be 4M+1 with M >= 1.
  explicit Subspace(CMat rows);

  int M() const noexcept { return M_; }
  int n_samples() const noexcept { return static_cast<int>(rows_.cols()); }
  int dim() const noexcept { return static_cast<int>(rows_.rows()); }
  double coherence_mu() const noexcept { return coherence_mu_; }

  /// K x N matrix whose column n is b_{n-2M}.
  const CMat& rows() const noexcept { return rows_; }
  auto row(int index) const { return rows_.col(index); }
  /// The N x K matrix B.
  CMat matrix() const { return rows_.adjoint(); }
  double frobenius_norm() const { return rows_.norm(); }
  /// ||b_m||_2^2 for every sample.
  RVec row_norms_squared() const { return rows_.colwise().squaredNorm().transpose(); }

 private:
  CMat rows_;
  int M_ = 0;
  double coherence_mu_ = 0.0;
};

struct GroundTruth {
  std::vector<double> freqs;
  std::vector<double> amps;
  std::vector<CVec> waveform_coeffs;

  std::size_t size() const noexcept { return freqs.size(); }
  /// Throws DomainError when amplitudes, frequencies or unit-norm waveforms are invalid.
  void validate(int K) const;
};

struct SignalInstance {
  Subspace subspace;
  GroundTruth truth;
  CVec clean;
  CVec noisy;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

inline int samples_for(int M) { return 4 * M + 1; }
inline int index_of(int m, int M) { return m + 2 * M; }
inline int sample_of(int index, int M) { return index - 2 * M; }

/// a(tau) with entry e^{i 2 pi tau m} at index m + 2M.
CVec atom_vector(double tau, int M);

Subspace generate_subspace_rademacher(int M, int K, std::uint64_t seed);

/// Clean samples by direct evaluation of the signal model.
CVec generate_signal(const Subspace& subspace, const GroundTruth& truth);

/// y = clean + z with z ~ CN(0, sigma^2): real and imaginary parts N(0, sigma^2/2).
CVec add_noise(const CVec& clean, double sigma, std::uint64_t seed);

/// X* = sum_j c_j h_j a(tau_j)^H, a K x N matrix.
CMat lift_truth(const GroundTruth& truth, const Subspace& subspace);

/// [B(X)]_m = b_m^H X e_m.
CVec apply_B(const Subspace& subspace, const CMat& X);
/// B*(x): column m equals x(m) b_m.
CMat apply_Badj(const Subspace& subspace, const CVec& x);

/// Circular distance on [0,1).
double wrap_distance(double t1, double t2);
double min_wrap_separation(const std::vector<double>& freqs);

/// J unit-norm vectors with i.i.d. standard normal real and imaginary parts, normalized.
std::vector<CVec> random_waveforms(int J, int K, std::uint64_t seed);

/// J distinct points of the grid {0, 1/M, ..., 1 - 1/M}, sorted ascending.
std::vector<double> random_grid_frequencies(int J, int M, std::uint64_t seed);

SignalInstance make_instance(Subspace subspace, GroundTruth truth, double sigma, std::uint64_t noise_seed);

}  // namespace modwave
