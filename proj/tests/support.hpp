#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "modwave/model.hpp"
#include "modwave/rng.hpp"

namespace modwave::testing {

inline CMat random_cmat(CounterRng& rng, int rows, int cols) {
  CMat A(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) A(r, c) = {rng.normal(), rng.normal()};
  return A;
}

inline CVec random_cvec(CounterRng& rng, int n) { return random_cmat(rng, n, 1).col(0); }

/// J frequencies drawn uniformly with wrap separation at least `sep` (rejection sampling).
inline std::vector<double> separated_freqs(CounterRng& rng, int J, double sep) {
  for (;;) {
    std::vector<double> f(J);
    for (auto& t : f) t = rng.uniform();
    std::sort(f.begin(), f.end());
    if (J == 1 || min_wrap_separation(f) >= sep) return f;
  }
}

inline GroundTruth random_truth(CounterRng& rng, int J, int K, double sep) {
  GroundTruth t;
  t.freqs = separated_freqs(rng, J, sep);
  for (int j = 0; j < J; ++j) {
    t.amps.push_back(0.5 + rng.uniform());
    CVec h = random_cvec(rng, K);
    t.waveform_coeffs.push_back(h / h.norm());
  }
  return t;
}

}  // namespace modwave::testing
