// NEON (AArch64) variants. Advanced SIMD is mandatory on AArch64, so no runtime probe is needed.

#include <arm_neon.h>

#include "modwave/simd/kernels.hpp"

namespace modwave::simd {

namespace {

// One complex double per register: [re, im].

inline float64x2_t load1(const cplx* p) { return vld1q_f64(reinterpret_cast<const double*>(p)); }

inline float64x2_t cmul(float64x2_t a, float64x2_t b) {
  const float64x2_t a_re = vdupq_laneq_f64(a, 0);
  const float64x2_t a_im = vdupq_laneq_f64(a, 1);
  const float64x2_t b_swap = vextq_f64(b, b, 1);                  // [bi, br]
  const float64x2_t sign = {-1.0, 1.0};
  return vfmaq_f64(vmulq_f64(a_re, b), vmulq_f64(a_im, b_swap), sign);  // [ar br - ai bi, ar bi + ai br]
}

inline cplx to_cplx(float64x2_t v) { return {vgetq_lane_f64(v, 0), vgetq_lane_f64(v, 1)}; }

cplx dotu_neon(const cplx* a, const cplx* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc0 = vaddq_f64(acc0, cmul(load1(a + i), load1(b + i)));
    acc1 = vaddq_f64(acc1, cmul(load1(a + i + 1), load1(b + i + 1)));
  }
  cplx s = to_cplx(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

cplx dotc_neon(const cplx* a, const cplx* b, std::size_t n) {
  const float64x2_t conj_mask = {1.0, -1.0};
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) acc = vaddq_f64(acc, cmul(vmulq_f64(load1(a + i), conj_mask), load1(b + i)));
  return to_cplx(acc);
}

void abs2_accumulate_neon(double* acc, const cplx* z, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t z0 = load1(z + i);
    const float64x2_t z1 = load1(z + i + 1);
    const float64x2_t sums = vpaddq_f64(vmulq_f64(z0, z0), vmulq_f64(z1, z1));  // [|z0|^2, |z1|^2]
    vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), sums));
  }
  for (; i < n; ++i) acc[i] += z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
}

Moments moments_neon(const cplx* c, const cplx* p, const double* w, std::size_t n) {
  float64x2_t a0 = vdupq_n_f64(0.0);
  float64x2_t a1 = vdupq_n_f64(0.0);
  float64x2_t a2 = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t prod = cmul(load1(c + i), load1(p + i));
    const float64x2_t wv = vdupq_n_f64(w[i]);
    const float64x2_t wprod = vmulq_f64(wv, prod);
    a0 = vaddq_f64(a0, prod);
    a1 = vaddq_f64(a1, wprod);
    a2 = vfmaq_f64(a2, wv, wprod);
  }
  return {to_cplx(a0), to_cplx(a1), to_cplx(a2)};
}

void axpy_neon(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const float64x2_t va = {alpha.real(), alpha.imag()};
  for (std::size_t i = 0; i < n; ++i) {
    double* dst = reinterpret_cast<double*>(y + i);
    vst1q_f64(dst, vaddq_f64(vld1q_f64(dst), cmul(va, load1(x + i))));
  }
}

constexpr KernelTable kNeon{
    "neon", dotu_neon, dotc_neon, abs2_accumulate_neon, moments_neon, axpy_neon,
};

}  // namespace

namespace detail {
const KernelTable& neon_table_unchecked() noexcept { return kNeon; }
}  // namespace detail

}  // namespace modwave::simd
