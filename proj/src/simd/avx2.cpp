// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the dispatcher has confirmed CPU support.

#include <immintrin.h>

#include "modwave/simd/kernels.hpp"

namespace modwave::simd {

namespace {

// Two interleaved complex doubles per register: [re0, im0, re1, im1].

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }

inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d b_swap = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_swap));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// (sum of even lanes, sum of odd lanes)
inline cplx hsum_pairs(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return {_mm_cvtsd_f64(s), _mm_cvtsd_f64(_mm_unpackhi_pd(s, s))};
}

cplx dotu_avx2(const cplx* a, const cplx* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = _mm256_add_pd(acc, cmul(load2(a + i), load2(b + i)));
  cplx s = hsum_pairs(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

cplx dotc_avx2(const cplx* a, const cplx* b, std::size_t n) {
  __m256d same = _mm256_setzero_pd();
  __m256d cross = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = load2(a + i);
    const __m256d vb = load2(b + i);
    same = _mm256_fmadd_pd(va, vb, same);                                // ar*br, ai*bi
    cross = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0x5), cross);      // ar*bi, ai*br
  }
  const cplx c = hsum_pairs(cross);
  cplx s{hsum(same), c.real() - c.imag()};
  for (; i < n; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

void abs2_accumulate_avx2(double* acc, const cplx* z, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d z01 = load2(z + i);
    const __m256d z23 = load2(z + i + 2);
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(z01, z01), _mm256_mul_pd(z23, z23));
    const __m256d ordered = _mm256_permute4x64_pd(h, 0xD8);
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), ordered));
  }
  for (; i < n; ++i) acc[i] += z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
}

Moments moments_avx2(const cplx* c, const cplx* p, const double* w, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d prod = cmul(load2(c + i), load2(p + i));
    const __m256d wv = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w + i)), 0x50);
    const __m256d wprod = _mm256_mul_pd(wv, prod);
    a0 = _mm256_add_pd(a0, prod);
    a1 = _mm256_add_pd(a1, wprod);
    a2 = _mm256_fmadd_pd(wv, wprod, a2);
  }
  Moments m{hsum_pairs(a0), hsum_pairs(a1), hsum_pairs(a2)};
  for (; i < n; ++i) {
    const cplx prod = c[i] * p[i];
    m.m0 += prod;
    m.m1 += w[i] * prod;
    m.m2 += w[i] * w[i] * prod;
  }
  return m;
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d va = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    double* dst = reinterpret_cast<double*>(y + i);
    _mm256_storeu_pd(dst, _mm256_add_pd(_mm256_loadu_pd(dst), cmul(va, load2(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

constexpr KernelTable kAvx2{
    "avx2", dotu_avx2, dotc_avx2, abs2_accumulate_avx2, moments_avx2, axpy_avx2,
};

}  // namespace

namespace detail {
const KernelTable& avx2_table_unchecked() noexcept { return kAvx2; }
}  // namespace detail

}  // namespace modwave::simd
