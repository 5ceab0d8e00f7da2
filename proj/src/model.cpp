#include "modwave/model.hpp"

#include <algorithm>
#include <cmath>

#include "modwave/rng.hpp"

namespace modwave {

Subspace::Subspace(CMat rows) : rows_(std::move(rows)) {
  const auto n = rows_.cols();
  if (rows_.rows() < 1) throw DimensionError("Subspace: dimension K must be at least 1");
  if (n < 5 || (n - 1) % 4 != 0) throw DimensionError("Subspace: sample count must be 4M+1 with M >= 1");
  if (rows_.rows() > n) throw DimensionError("Subspace: dimension K exceeds sample count N");
  M_ = static_cast<int>((n - 1) / 4);
  coherence_mu_ = rows_.cwiseAbs2().maxCoeff();
}

void GroundTruth::validate(int K) const {
  if (amps.size() != freqs.size() || waveform_coeffs.size() != freqs.size())
    throw DimensionError("GroundTruth: freqs, amps and waveform_coeffs must have equal length");
  for (double f : freqs)
    if (!(f >= 0.0 && f < 1.0)) throw DomainError("GroundTruth: frequency outside [0,1)");
  for (double c : amps)
    if (!(c > 0.0)) throw DomainError("GroundTruth: amplitudes must be positive");
  for (const auto& h : waveform_coeffs) {
    if (h.size() != K) throw DimensionError("GroundTruth: waveform coefficient length differs from K");
    if (std::abs(h.norm() - 1.0) > 1e-12) throw DomainError("GroundTruth: waveform coefficients must have unit norm");
  }
}

CVec atom_vector(double tau, int M) {
  if (!(tau >= 0.0 && tau < 1.0)) throw DomainError("atom_vector: tau must lie in [0,1)");
  if (M < 1) throw DomainError("atom_vector: M must be at least 1");
  const int n = samples_for(M);
  CVec a(n);
  for (int i = 0; i < n; ++i) {
    const double phase = kTwoPi * tau * sample_of(i, M);
    a[i] = {std::cos(phase), std::sin(phase)};
  }
  return a;
}

Subspace generate_subspace_rademacher(int M, int K, std::uint64_t seed) {
  if (M < 1 || K < 1) throw DomainError("generate_subspace_rademacher: need M >= 1 and K >= 1");
  const int n = samples_for(M);
  CounterRng rng(seed);
  CMat rows(K, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < K; ++k) rows(k, i) = rng.coin() ? 1.0 : -1.0;
  return Subspace(std::move(rows));
}

CVec generate_signal(const Subspace& subspace, const GroundTruth& truth) {
  truth.validate(subspace.dim());
  const int n = subspace.n_samples();
  const int M = subspace.M();
  CVec x = CVec::Zero(n);
  for (std::size_t j = 0; j < truth.size(); ++j) {
    for (int i = 0; i < n; ++i) {
      const double phase = -kTwoPi * sample_of(i, M) * truth.freqs[j];
      const cplx gain = subspace.row(i).dot(truth.waveform_coeffs[j]);  // b_m^H h_j
      x[i] += truth.amps[j] * cplx(std::cos(phase), std::sin(phase)) * gain;
    }
  }
  return x;
}

CVec add_noise(const CVec& clean, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw DomainError("add_noise: sigma must be nonnegative");
  CVec y = clean;
  if (sigma == 0.0) return y;
  CounterRng rng(seed);
  const double s = sigma / std::sqrt(2.0);
  for (auto& v : y) {
    const double re = rng.normal();
    const double im = rng.normal();
    v += cplx(s * re, s * im);
  }
  return y;
}

CMat lift_truth(const GroundTruth& truth, const Subspace& subspace) {
  truth.validate(subspace.dim());
  CMat X = CMat::Zero(subspace.dim(), subspace.n_samples());
  for (std::size_t j = 0; j < truth.size(); ++j)
    X.noalias() += truth.amps[j] * truth.waveform_coeffs[j] * atom_vector(truth.freqs[j], subspace.M()).adjoint();
  return X;
}

CVec apply_B(const Subspace& subspace, const CMat& X) {
  if (X.rows() != subspace.dim() || X.cols() != subspace.n_samples())
    throw DimensionError("apply_B: X must be K x N");
  return subspace.rows().conjugate().cwiseProduct(X).colwise().sum().transpose();
}

CMat apply_Badj(const Subspace& subspace, const CVec& x) {
  if (x.size() != subspace.n_samples()) throw DimensionError("apply_Badj: x must have length N");
  return subspace.rows() * x.asDiagonal();
}

double wrap_distance(double t1, double t2) {
  const double d = std::abs(t1 - t2);
  return std::min(d, 1.0 - d);
}

double min_wrap_separation(const std::vector<double>& freqs) {
  double best = 1.0;
  for (std::size_t i = 0; i < freqs.size(); ++i)
    for (std::size_t j = i + 1; j < freqs.size(); ++j) best = std::min(best, wrap_distance(freqs[i], freqs[j]));
  return best;
}

std::vector<CVec> random_waveforms(int J, int K, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<CVec> out;
  out.reserve(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) {
    CVec h(K);
    for (int k = 0; k < K; ++k) {
      const double re = rng.normal();
      const double im = rng.normal();
      h[k] = {re, im};
    }
    h /= h.norm();
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<double> random_grid_frequencies(int J, int M, std::uint64_t seed) {
  if (J < 1 || J > M) throw DomainError("random_grid_frequencies: need 1 <= J <= M");
  const double min_sep = 1.0 / M;
  CounterRng rng(seed);
  for (;;) {
    auto idx = sample_without_replacement(rng, static_cast<std::size_t>(M), static_cast<std::size_t>(J));
    std::vector<double> freqs;
    for (auto i : idx) freqs.push_back(static_cast<double>(i) * min_sep);
    std::sort(freqs.begin(), freqs.end());
    if (J == 1 || min_wrap_separation(freqs) >= min_sep * (1.0 - 1e-12)) return freqs;
  }
}

SignalInstance make_instance(Subspace subspace, GroundTruth truth, double sigma, std::uint64_t noise_seed) {
  SignalInstance inst;
  inst.clean = generate_signal(subspace, truth);
  inst.noisy = add_noise(inst.clean, sigma, noise_seed);
  inst.noise_sigma = sigma;
  inst.seed = noise_seed;
  inst.subspace = std::move(subspace);
  inst.truth = std::move(truth);
  return inst;
}

}  // namespace modwave
