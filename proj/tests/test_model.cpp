#include <doctest.h>

#include <cmath>
#include <set>

#include "modwave/model.hpp"
#include "modwave/rng.hpp"
#include "support.hpp"

using namespace modwave;

TEST_CASE("counter rng is reproducible and addressable") {
  CounterRng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  CHECK(stream_seed(1, Stream::Noise) != stream_seed(1, Stream::Subspace));
  CHECK(hash_combine(1, 2) != hash_combine(2, 1));
}

TEST_CASE("rng moments") {
  CounterRng rng(5);
  const int n = 200000;
  double s = 0, s2 = 0, u = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
    const double v = rng.uniform();
    CHECK((v >= 0.0 && v < 1.0));
    u += v;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
  CHECK(std::abs(u / n - 0.5) < 0.01);
  for (int i = 0; i < 1000; ++i) CHECK(rng.below(7) < 7u);
}

TEST_CASE("sample without replacement is distinct") {
  CounterRng rng(9);
  auto idx = sample_without_replacement(rng, 20, 20);
  CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == 20);
}

TEST_CASE("subspace shape and validation") {
  auto S = generate_subspace_rademacher(5, 3, 11);
  CHECK(S.n_samples() == 21);
  CHECK(S.dim() == 3);
  CHECK(S.M() == 5);
  for (int n = 0; n < 21; ++n)
    for (int k = 0; k < 3; ++k) CHECK(std::abs(std::abs(S.rows()(k, n)) - 1.0) == 0.0);
  CHECK(S.frobenius_norm() == doctest::Approx(std::sqrt(63.0)));
  CHECK_THROWS_AS(Subspace(CMat::Ones(2, 20)), DimensionError);
  CHECK_THROWS_AS(generate_subspace_rademacher(0, 2, 1), DomainError);
}

TEST_CASE("adjoint identity <B(X), z> = <X, B*(z)>") {
  CounterRng rng(123);
  for (int t = 0; t < 20; ++t) {
    const int M = 1 + static_cast<int>(rng.below(10));
    const int K = 1 + static_cast<int>(rng.below(6));
    auto S = generate_subspace_rademacher(M, K, rng.next_u64());
    CMat X = testing::random_cmat(rng, K, samples_for(M));
    CVec z = testing::random_cvec(rng, samples_for(M));
    const cplx lhs = apply_B(S, X).dot(z);
    const cplx rhs = (X.adjoint() * apply_Badj(S, z)).trace();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(lhs)));
  }
}

TEST_CASE("signal equals B applied to the lifted truth") {
  CounterRng rng(77);
  auto S = generate_subspace_rademacher(6, 3, 2);
  auto truth = testing::random_truth(rng, 3, 3, 1.0 / 25);
  CVec x = generate_signal(S, truth);
  CHECK((x - apply_B(S, lift_truth(truth, S))).norm() <= 1e-12 * x.norm());
  CHECK(x.size() == 25);
}

TEST_CASE("atom vector and wrap distance") {
  CVec a = atom_vector(0.25, 2);
  CHECK(a.size() == 9);
  CHECK(std::abs(a(index_of(1, 2)) - cplx(0, 1)) < 1e-15);
  CHECK(std::abs(a(index_of(0, 2)) - 1.0) < 1e-15);
  CHECK_THROWS_AS(atom_vector(1.0, 2), DomainError);
  CHECK(wrap_distance(0.95, 0.05) == doctest::Approx(0.1));
  CHECK(min_wrap_separation({0.1, 0.5, 0.97}) == doctest::Approx(0.13));
}

TEST_CASE("noise variance and determinism") {
  CVec clean = CVec::Zero(20001);
  CVec y = add_noise(clean, 0.3, 4);
  CHECK(y.squaredNorm() / y.size() == doctest::Approx(0.09).epsilon(0.03));
  CHECK(add_noise(clean, 0.3, 4) == y);
  CHECK(add_noise(clean, 0.0, 4) == clean);
  CHECK_THROWS_AS(add_noise(clean, -1.0, 4), DomainError);
}

TEST_CASE("grid frequencies and waveforms") {
  auto f = random_grid_frequencies(6, 20, 3);
  CHECK(f.size() == 6);
  CHECK(min_wrap_separation(f) >= 1.0 / 20 - 1e-15);
  for (double t : f) CHECK(std::abs(t * 20 - std::round(t * 20)) < 1e-12);
  auto h = random_waveforms(4, 5, 8);
  for (auto& v : h) CHECK(v.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(random_grid_frequencies(21, 20, 3), DomainError);
}

TEST_CASE("ground truth validation") {
  GroundTruth t{{0.1}, {-1.0}, {CVec::Ones(2) / std::sqrt(2.0)}};
  CHECK_THROWS_AS(t.validate(2), DomainError);
  t.amps = {1.0};
  CHECK_NOTHROW(t.validate(2));
  CHECK_THROWS_AS(t.validate(3), DimensionError);
}
