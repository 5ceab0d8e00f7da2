#include "modwave/trigpoly.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "modwave/simd/kernels.hpp"

namespace modwave {

namespace {

// FFTW planning is not thread safe; execution on distinct arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

class BackwardPlan {
 public:
  BackwardPlan(int L, fftw_complex* in, fftw_complex* out) {
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft_1d(L, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~BackwardPlan() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
  BackwardPlan(const BackwardPlan&) = delete;
  BackwardPlan& operator=(const BackwardPlan&) = delete;
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

inline double wrap01(double t) {
  t -= std::floor(t);
  return t >= 1.0 ? 0.0 : t;
}

}  // namespace

TrigPoly::TrigPoly(const CMat& coeffs) : coeffs_t_(coeffs.transpose()) {
  const auto n = coeffs.cols();
  if (n < 5 || (n - 1) % 4 != 0) throw DimensionError("TrigPoly: coefficient count must be 4M+1");
  M_ = static_cast<int>((n - 1) / 4);
  m_.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) m_[static_cast<std::size_t>(i)] = static_cast<double>(i - 2 * M_);
}

void TrigPoly::phasors(double tau, CVec& p) const {
  p.resize(n_samples());
  for (int i = 0; i < n_samples(); ++i) {
    const double t = tau * m_[static_cast<std::size_t>(i)];
    const double phase = kTwoPi * (t - std::floor(t));
    p[i] = {std::cos(phase), std::sin(phase)};
  }
}

CVec TrigPoly::eval(double tau) const {
  CVec p;
  phasors(tau, p);
  const auto& kern = simd::active();
  CVec out(dim());
  for (int k = 0; k < dim(); ++k) out[k] = kern.dotu(coeffs_t_.col(k).data(), p.data(), static_cast<std::size_t>(n_samples()));
  return out;
}

TrigPoly::Derivatives TrigPoly::eval_derivatives(double tau) const {
  CVec p;
  phasors(tau, p);
  const auto& kern = simd::active();
  Derivatives d{CVec(dim()), CVec(dim()), CVec(dim())};
  const cplx i2pi(0.0, kTwoPi);
  for (int k = 0; k < dim(); ++k) {
    const auto mo = kern.moments(coeffs_t_.col(k).data(), p.data(), m_.data(), static_cast<std::size_t>(n_samples()));
    d.d0[k] = mo.m0;
    d.d1[k] = i2pi * mo.m1;
    d.d2[k] = -kTwoPi * kTwoPi * mo.m2;
  }
  return d;
}

TrigPoly::Norm2 TrigPoly::norm2(double tau) const {
  const auto d = eval_derivatives(tau);
  const double f = d.d0.squaredNorm();
  const double df = 2.0 * d.d0.dot(d.d1).real();
  const double d2f = 2.0 * (d.d1.squaredNorm() + d.d0.dot(d.d2).real());
  return {f, df, d2f};
}

std::vector<double> TrigPoly::norm2_grid(int L, int derivative, GridMethod method) const {
  if (L < 1) throw DomainError("norm2_grid: L must be positive");
  if (derivative < 0 || derivative > 2) throw DomainError("norm2_grid: derivative order must be 0, 1 or 2");
  std::vector<double> out(static_cast<std::size_t>(L), 0.0);
  const int n = n_samples();
  const auto& kern = simd::active();

  if (method == GridMethod::Direct) {
    for (int l = 0; l < L; ++l) {
      const double tau = static_cast<double>(l) / L;
      if (derivative == 0) {
        out[static_cast<std::size_t>(l)] = eval(tau).squaredNorm();
      } else {
        const auto d = eval_derivatives(tau);
        out[static_cast<std::size_t>(l)] = (derivative == 1 ? d.d1 : d.d2).squaredNorm();
      }
    }
    return out;
  }

  // xi(l/L) = e^{-i 2 pi l 2M / L} * sum_n c_n e^{+i 2 pi l n / L}; the leading phase drops out of the norm.
  FftwBuffer in(static_cast<std::size_t>(L));
  FftwBuffer res(static_cast<std::size_t>(L));
  BackwardPlan plan(L, in.data, res.data);
  auto* in_c = reinterpret_cast<cplx*>(in.data);
  const auto* res_c = reinterpret_cast<const cplx*>(res.data);
  for (int k = 0; k < dim(); ++k) {
    std::fill(in_c, in_c + L, cplx(0.0, 0.0));
    for (int i = 0; i < n; ++i) {
      cplx c = coeffs_t_(i, k);
      const double w = kTwoPi * m_[static_cast<std::size_t>(i)];
      if (derivative == 1) c *= cplx(0.0, w);
      if (derivative == 2) c *= -w * w;
      in_c[i % L] += c;
    }
    plan.execute();
    kern.abs2_accumulate(out.data(), res_c, static_cast<std::size_t>(L));
  }
  return out;
}

LocalMax TrigPoly::refine_max(double lo, double hi) const {
  auto f_at = [&](double t) { return eval(wrap01(t)).squaredNorm(); };
  const auto nlo = norm2(wrap01(lo));
  const auto nhi = norm2(wrap01(hi));
  double a = lo, b = hi;
  if (nlo.df > 0.0 && nhi.df < 0.0) {
    // Bisection on the sign of the derivative.
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      const double mid = 0.5 * (a + b);
      const double g = norm2(wrap01(mid)).df;
      if (g > 0.0) a = mid;
      else if (g < 0.0) b = mid;
      else { a = b = mid; }
    }
    const double t = 0.5 * (a + b);
    LocalMax best{wrap01(t), f_at(t)};
    // Endpoints can win on a flat polynomial.
    if (nlo.f > best.value) best = {wrap01(lo), nlo.f};
    if (nhi.f > best.value) best = {wrap01(hi), nhi.f};
    return best;
  }
  // Golden-section search.
  const double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f_at(c), fd = f_at(d);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (fc >= fd) {
      b = d; d = c; fd = fc;
      c = b - invphi * (b - a);
      fc = f_at(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + invphi * (b - a);
      fd = f_at(d);
    }
  }
  const double t = 0.5 * (a + b);
  LocalMax best{wrap01(t), f_at(t)};
  if (nlo.f > best.value) best = {wrap01(lo), nlo.f};
  if (nhi.f > best.value) best = {wrap01(hi), nhi.f};
  return best;
}

std::vector<LocalMax> TrigPoly::local_maxima(int L, double floor) const {
  const auto g = norm2_grid(L);
  std::vector<LocalMax> out;
  for (int l = 0; l < L; ++l) {
    const double v = g[static_cast<std::size_t>(l)];
    const double prev = g[static_cast<std::size_t>((l + L - 1) % L)];
    const double next = g[static_cast<std::size_t>((l + 1) % L)];
    if (v < floor || !(v > prev && v >= next)) continue;
    out.push_back(refine_max(static_cast<double>(l - 1) / L, static_cast<double>(l + 1) / L));
  }
  std::sort(out.begin(), out.end(), [](const LocalMax& a, const LocalMax& b) { return a.tau < b.tau; });
  return out;
}

}  // namespace modwave
