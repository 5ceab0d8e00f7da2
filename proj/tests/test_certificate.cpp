#include <doctest.h>

#include <cmath>

#include "modwave/atomic.hpp"
#include "modwave/certificate.hpp"
#include "modwave/model.hpp"
#include "modwave/solver.hpp"
#include "support.hpp"

using namespace modwave;

TEST_CASE("squared fejer coefficients") {
  for (int M : {1, 2, 7, 20}) {
    auto g = squared_fejer_coeffs(M);
    REQUIRE(g.size() == static_cast<std::size_t>(samples_for(M)));
    double sum = 0;
    for (double v : g) sum += v;
    CHECK(sum / M == doctest::Approx(1.0).epsilon(1e-13));
    for (int m = 0; m <= 2 * M; ++m) {
      CHECK(g[index_of(m, M)] == doctest::Approx(g[index_of(-m, M)]).epsilon(1e-15));
      CHECK(g[index_of(m, M)] >= 0.0);
    }
  }
  CHECK_THROWS_AS(squared_fejer_coeffs(0), DomainError);
}

TEST_CASE("fourier synthesis reproduces the closed form, M = 20") {
  const int M = 20;
  auto g = squared_fejer_coeffs(M);
  double worst = 0;
  for (int l = 0; l < 10000; ++l) {
    const double tau = l / 10000.0;
    cplx s = 0;
    for (int m = -2 * M; m <= 2 * M; ++m) s += g[index_of(m, M)] * std::polar(1.0, kTwoPi * tau * m);
    s /= double(M);
    // independent closed form
    const double den = (M + 1) * std::sin(M_PI * tau);
    const double q = l == 0 ? 1.0 : std::sin(M_PI * (M + 1) * tau) / den;
    worst = std::max(worst, std::abs(s - q * q * q * q));
    if (l % 97 == 0) CHECK(squared_fejer_kernel(tau, M) == doctest::Approx(q * q * q * q).epsilon(1e-12));
  }
  CHECK(worst <= 1e-10);
  CHECK(squared_fejer_kernel(0.0, M) == 1.0);
}

TEST_CASE("eval_Q is the polynomial B*(q) a(tau) and linear in q") {
  CounterRng rng(4);
  auto S = generate_subspace_rademacher(5, 3, 1);
  DualCertificate c1{testing::random_cvec(rng, 21), S}, c2{testing::random_cvec(rng, 21), S};
  DualCertificate sum{c1.q + c2.q, S};
  for (double tau : {0.0, 0.2, 0.61}) {
    CHECK((eval_Q(c1, tau) - c1.coefficients() * atom_vector(tau, 5)).norm() < 1e-12);
    CHECK((eval_Q(sum, tau) - eval_Q(c1, tau) - eval_Q(c2, tau)).norm() <= 1e-12);
  }
  DualCertificate bad{CVec::Zero(5), S};
  CHECK_THROWS_AS(eval_Q(bad, 0.1), DimensionError);
}

namespace {

void check_interpolating(const GroundTruth& truth, const Subspace& S, bool expect_far) {
  auto res = construct_certificate(truth, S);
  const int N = S.n_samples();
  REQUIRE(res.report.support.size() == truth.size());
  for (std::size_t j = 0; j < truth.size(); ++j) {
    const auto& s = res.report.support[j];
    CHECK(s.defect <= 1e-8);
    CHECK(s.derivative_norm <= 1e-6 * N);
    CHECK((eval_Q(res.certificate, truth.freqs[j]) - truth.waveform_coeffs[j]).norm() <= 1e-8);
    CHECK(res.report.near_ok[j]);
    CHECK(std::abs(res.report.near_exponent[j] - 2.0) <= 0.2);
  }
  CHECK(res.report.condition_number >= 1.0);
  CHECK(std::isfinite(res.report.condition_number));
  if (!expect_far) return;
  CHECK(res.report.far_max < 1.0);
  auto peaks = localize(res.certificate, 0.999);
  REQUIRE(peaks.size() == truth.size());
  for (std::size_t j = 0; j < truth.size(); ++j) {
    CHECK(std::abs(peaks[j].tau - truth.freqs[j]) <= 1e-6);
    CHECK(peaks[j].strength == doctest::Approx(1.0).epsilon(1e-8));
  }
}

}  // namespace

TEST_CASE("certificate with the deterministic all-ones subspace") {
  std::vector<CVec> h(3, CVec::Ones(1));
  check_interpolating({{0.1, 0.15, 0.5}, {1, 2, 3}, h}, Subspace(CMat::Ones(1, 81)), true);
}

TEST_CASE("certificate for the fixed three frequencies, random subspaces") {
  // M = 50: far region bounded on every draw
  for (std::uint64_t s = 1; s <= 5; ++s)
    check_interpolating({{0.1, 0.15, 0.5}, {1, 2, 3}, random_waveforms(3, 4, s + 1000)},
                        generate_subspace_rademacher(50, 4, s), true);
  // M = 20, K = 4: the far bound holds on most draws only
  int ok = 0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    GroundTruth t{{0.1, 0.15, 0.5}, {1, 2, 3}, random_waveforms(3, 4, s + 1000)};
    auto S = generate_subspace_rademacher(20, 4, s);
    check_interpolating(t, S, false);
    ok += construct_certificate(t, S).report.far_max < 1.0;
  }
  CHECK(ok >= 10);
}

TEST_CASE("interpolation constraints on random separated configurations") {
  CounterRng rng(2024);
  const int M = 20, N = samples_for(M);
  for (int t = 0; t < 20; ++t) {
    const int J = 1 + static_cast<int>(rng.below(4));
    const int K = 1 + static_cast<int>(rng.below(4));
    auto S = generate_subspace_rademacher(M, K, rng.next_u64());
    auto truth = testing::random_truth(rng, J, K, 2.0 / N);
    auto res = construct_certificate(truth, S);
    for (const auto& s : res.report.support) {
      CHECK(s.defect <= 1e-8);
      CHECK(s.derivative_norm <= 1e-6 * N);
    }
    auto peaks = localize(res.certificate, 0.999);
    if (res.report.far_max < 0.999 && peaks.size() == truth.size()) {
      for (std::size_t j = 0; j < truth.size(); ++j) CHECK(std::abs(peaks[j].tau - truth.freqs[j]) <= 1e-6);
    }
  }
}

TEST_CASE("single frequency interpolation") {
  auto S = generate_subspace_rademacher(8, 2, 5);
  GroundTruth t{{0.73}, {1.0}, random_waveforms(1, 2, 6)};
  auto res = construct_certificate(t, S);
  CHECK(res.report.support[0].defect <= 1e-8);
}

TEST_CASE("violated separation is flagged") {
  auto S = generate_subspace_rademacher(20, 2, 5);
  const double d = 1.0 / (4.0 * 81) * 0.5;
  GroundTruth t{{0.3, 0.3 + d}, {1.0, 1.0}, random_waveforms(2, 2, 6)};
  bool flagged = false;
  try {
    auto res = construct_certificate(t, S);
    flagged = res.report.far_max >= 1.0;
    for (bool ok : res.report.near_ok) flagged |= !ok;
  } catch (const NumericalError& e) {
    flagged = true;
    CHECK(e.condition_number() >= 1e12);
  }
  CHECK(flagged);
}

TEST_CASE("residual certificate of a converged solution") {
  auto S = generate_subspace_rademacher(10, 3, 3);
  GroundTruth t{{0.1, 0.4, 0.75}, {1, 2, 3}, random_waveforms(3, 3, 4)};
  CVec y = add_noise(generate_signal(S, t), 0.1, 5);
  DenoiseProblem p{y, S, regularization_lambda(0.1, S, 0.5)};
  auto sol = solve_admm(p);
  REQUIRE(sol.converged);
  auto cert = residual_certificate(p, sol);
  CHECK((cert.q - (y - sol.x_hat) / p.lambda).norm() < 1e-14);
  const int N = S.n_samples();
  // at L = 40 pi N the bound carries the factor (1 - 1/20)^(-1/2) over the grid maximum
  const int L = static_cast<int>(std::ceil(40 * M_PI * N));
  const double inflation = 1.0 / std::sqrt(1.0 - kTwoPi * N / L);
  CHECK(certified_dual_norm_bound(cert.coefficients(), L) <= 1.01 * inflation);
  CHECK(dual_norm(cert.coefficients()).value <= 1 + 1e-3);
  auto peaks = localize(cert);
  for (double f : t.freqs) {
    double best = 1;
    for (const auto& pk : peaks) best = std::min(best, wrap_distance(pk.tau, f));
    CHECK(best <= 0.5 / N);
  }

  DenoiseProblem bad = p;
  bad.lambda = 0.0;
  CHECK_THROWS_AS(residual_certificate(bad, sol), DomainError);
  CHECK_THROWS_AS(localize(cert, 1.0), DomainError);
  CHECK_THROWS_AS(localize(cert, 0.0), DomainError);
}

TEST_CASE("zero certificate has no peaks") {
  auto S = generate_subspace_rademacher(4, 2, 1);
  CHECK(localize({CVec::Zero(17), S}).empty());
}
