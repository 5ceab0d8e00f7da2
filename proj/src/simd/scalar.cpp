#include "modwave/simd/kernels.hpp"

namespace modwave::simd {

namespace {

cplx dotu_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

cplx dotc_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void abs2_accumulate_scalar(double* acc, const cplx* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
}

Moments moments_scalar(const cplx* c, const cplx* p, const double* w, std::size_t n) {
  double r0 = 0, i0 = 0, r1 = 0, i1 = 0, r2 = 0, i2 = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double pr = c[k].real() * p[k].real() - c[k].imag() * p[k].imag();
    const double pi = c[k].real() * p[k].imag() + c[k].imag() * p[k].real();
    r0 += pr;
    i0 += pi;
    r1 += w[k] * pr;
    i1 += w[k] * pi;
    r2 += w[k] * w[k] * pr;
    i2 += w[k] * w[k] * pi;
  }
  return {{r0, i0}, {r1, i1}, {r2, i2}};
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

constexpr KernelTable kScalar{
    "scalar", dotu_scalar, dotc_scalar, abs2_accumulate_scalar, moments_scalar, axpy_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace modwave::simd
