#pragma once

// Complex inner-loop kernels with a scalar reference and ISA-specific variants.
// The active table is chosen once at first use from the running CPU; setting
// MODWAVE_SIMD=scalar in the environment forces the reference path.

#include <complex>
#include <cstddef>
#include <string_view>

namespace modwave::simd {

using cplx = std::complex<double>;

struct Moments {
  cplx m0;  // sum c_i p_i
  cplx m1;  // sum w_i c_i p_i
  cplx m2;  // sum w_i^2 c_i p_i
};

struct KernelTable {
  std::string_view name;
  /// sum a_i b_i
  cplx (*dotu)(const cplx* a, const cplx* b, std::size_t n);
  /// sum conj(a_i) b_i
  cplx (*dotc)(const cplx* a, const cplx* b, std::size_t n);
  /// acc_i += |z_i|^2
  void (*abs2_accumulate)(double* acc, const cplx* z, std::size_t n);
  /// Weighted sums used to evaluate a trigonometric polynomial and its first two derivatives.
  Moments (*moments)(const cplx* c, const cplx* p, const double* w, std::size_t n);
  /// y_i += alpha * x_i
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the variant is not compiled in or the CPU lacks the instructions.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

/// The table in use for this process.
const KernelTable& active() noexcept;

/// Every table usable on the running CPU, reference first.
std::size_t available(const KernelTable** out, std::size_t capacity) noexcept;

}  // namespace modwave::simd
