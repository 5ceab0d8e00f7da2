#include <doctest.h>

#include <cmath>
#include <sstream>

#include "modwave/experiments.hpp"

using namespace modwave;

namespace {

SweepConfig small_config() {
  SweepConfig c;
  c.variable = SweepVariable::Sigma;
  c.values = {0.05, 0.1};
  c.M = 5;
  c.freqs = {0.1, 0.4, 0.7};
  c.trials = 3;
  return c;
}

}  // namespace

TEST_CASE("enum round trips") {
  for (auto v : {SweepVariable::N, SweepVariable::Sigma, SweepVariable::J, SweepVariable::K})
    CHECK(parse_sweep_variable(to_string(v)) == v);
  CHECK(parse_sweep_variable("M") == SweepVariable::N);
  CHECK(parse_freqs_mode(to_string(FreqsMode::GridRandom)) == FreqsMode::GridRandom);
  CHECK_THROWS(parse_sweep_variable("rho"));
}

TEST_CASE("config validation names the field") {
  SweepConfig c = small_config();
  CHECK_NOTHROW(c.validate());
  c.trials = 0;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("trials"), DomainError);
  c = small_config();
  c.values = {};
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("values"), DomainError);
  c = small_config();
  c.values = {0.1, 0.05};
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = small_config();
  c.values = {0.0};
  CHECK_THROWS_AS(c.validate(), DomainError);  // sigma = 0 needs an explicit lambda
  c.lambda_scale = 1e-6;
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("resolve substitutes the swept value") {
  SweepConfig c = small_config();
  c.variable = SweepVariable::J;
  auto p = resolve(c, 4);
  CHECK(p.J == 4);
  CHECK(p.amps == std::vector<double>{1, 2, 3, 4});
  c.variable = SweepVariable::N;
  CHECK(resolve(c, 40).M == 40);
  c.variable = SweepVariable::K;
  CHECK(resolve(c, 7).K == 7);
}

TEST_CASE("trial seeds and instances are deterministic") {
  CHECK(trial_seed(1, 0.1, 0) == trial_seed(1, 0.1, 0));
  CHECK(trial_seed(1, 0.1, 0) != trial_seed(1, 0.1, 1));
  CHECK(trial_seed(1, 0.1, 0) != trial_seed(1, 0.2, 0));
  CHECK(trial_seed(1, 0.1, 0) != trial_seed(2, 0.1, 0));
  SweepConfig c = small_config();
  auto a = trial_instance(c, 0.1, 2), b = trial_instance(c, 0.1, 2);
  CHECK(a.noisy == b.noisy);
  CHECK(a.subspace.rows() == b.subspace.rows());

  c.variable = SweepVariable::J;
  c.freqs_mode = FreqsMode::GridRandom;
  auto g = trial_instance(c, 4, 0);
  CHECK(g.truth.size() == 4);
  CHECK(min_wrap_separation(g.truth.freqs) >= 1.0 / c.M - 1e-12);
  CHECK(g.truth.amps == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("run_trial is reproducible and records sane values") {
  SweepConfig c = small_config();
  c.localize = true;
  auto r1 = run_trial(c, 0.1, 1), r2 = run_trial(c, 0.1, 1);
  CHECK(r1.mse == r2.mse);
  CHECK(r1.iterations == r2.iterations);
  CHECK(r1.seed == trial_seed(c.base_seed, 0.1, 1));
  CHECK(r1.N == 21);
  CHECK(r1.converged);
  CHECK(std::isfinite(r1.mse));
  CHECK(r1.mse > 0);
  CHECK(r1.localization_errors.size() == 3);
  CHECK(r1.wall_time >= 0);
}

TEST_CASE("fixed configuration at M = 20 beats the trivial estimator") {
  SweepConfig c;
  c.values = {0.1};
  auto inst = trial_instance(c, 0.1, 0);
  auto r = run_trial(c, 0.1, 0);
  CHECK(r.converged);
  CHECK(r.mse > 0);
  CHECK(r.mse < inst.clean.squaredNorm() / inst.clean.size());
}

TEST_CASE("noiseless recovery with a tiny lambda") {
  SweepConfig c = small_config();
  c.values = {0.0};
  c.lambda_scale = 1e-6;
  auto r = run_trial(c, 0.0, 0);
  CHECK(r.mse <= 1e-6);
  CHECK(r.raw_mse == 0.0);
}

TEST_CASE("sweep output does not depend on the worker count") {
  SweepConfig c = small_config();
  auto a = sweep(c, 1), b = sweep(c, 3);
  std::ostringstream sa, sb, ta, tb;
  write_aggregate_csv(sa, a.points);
  write_aggregate_csv(sb, b.points);
  CHECK(sa.str() == sb.str());
  REQUIRE(a.records.size() == 6);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].mse == b.records[i].mse);
    CHECK(a.records[i].trial == static_cast<int>(i % 3));
  }
  CHECK(sa.str().rfind("value,mean_mse,std_mse,scaled_mse\n", 0) == 0);
  write_trials_csv(ta, a.records);
  CHECK(ta.str().rfind("variable,value,trial,seed,mse,converged,iters,wall_time\n", 0) == 0);
  int progress = 0;
  sweep(c, 2, [&](const ExperimentRecord&) { ++progress; });
  CHECK(progress == 6);
}

TEST_CASE("aggregate uses the sample standard deviation") {
  std::vector<ExperimentRecord> recs(3);
  const double mses[] = {1.0, 2.0, 4.0};
  for (int i = 0; i < 3; ++i) {
    recs[i].trial = 2 - i;
    recs[i].mse = mses[i];
    recs[i].converged = true;
  }
  auto p = aggregate(SweepVariable::Sigma, 0.5, recs, 81);
  CHECK(p.mean_mse == doctest::Approx(7.0 / 3));
  CHECK(p.std_mse == doctest::Approx(std::sqrt((16.0 / 9 + 1.0 / 9 + 25.0 / 9) / 2)));
  CHECK(p.scaled_mse == doctest::Approx(p.mean_mse / 0.25));
  CHECK(p.trials == 3);
  auto q = aggregate(SweepVariable::N, 20, recs, 81);
  CHECK(q.scaled_mse == doctest::Approx(q.mean_mse * 81 / std::log(81.0)));
}

TEST_CASE("scaling fits") {
  std::vector<double> x{0.1, 0.2, 0.3, 0.4, 0.5}, y;
  for (double v : x) y.push_back(3 * v * v);
  std::vector<double> x2;
  for (double v : x) x2.push_back(v * v);
  auto f = fit_scaling(x2, y, "sigma^2");
  CHECK(f.slope == doctest::Approx(3.0));
  CHECK(f.intercept == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.predictor == "sigma^2");
  CHECK_THROWS_AS(fit_scaling({1, 2, 3}, {1, 2, 3}), DomainError);
  CHECK_THROWS_AS(fit_scaling({1, 1, 1, 1}, {1, 2, 3, 4}), DomainError);

  std::vector<AggregatePoint> pts;
  for (double s : {0.05, 0.1, 0.15, 0.2}) pts.push_back({s, 2 * s * s + 1e-4, 0, 0, 0, 1, 1, 0});
  auto g = fit_scaling(pts, SweepVariable::Sigma);
  CHECK(g.slope == doctest::Approx(2.0));
  CHECK(g.intercept == doctest::Approx(1e-4));
  auto noisy = fit_scaling({1, 2, 3, 4}, {1, 3, 2, 4});
  CHECK(noisy.r_squared >= 0.0);
  CHECK(noisy.r_squared <= 1.0);
}

TEST_CASE("predictors") {
  CHECK(clamped_jlogj(1) == 1.0);
  CHECK(clamped_jlogj(2) == 2.0);
  CHECK(clamped_jlogj(5) == doctest::Approx(5 * std::log(5.0)));
  CHECK(predictor_value(SweepVariable::N, 20) == doctest::Approx(std::log(81.0) / 81));
  CHECK(predictor_value(SweepVariable::Sigma, 0.2) == doctest::Approx(0.04));
  CHECK(predictor_value(SweepVariable::K, 3) == doctest::Approx(3 * std::log(3.0)));
}

TEST_CASE("oracle comparison") {
  SweepConfig c;
  c.values = {0.1};
  c.trials = 200;
  auto o = oracle_comparison(c, 0.1);
  CHECK(o.theory == doctest::Approx(0.01 * 12 / 81));
  CHECK(o.ratio >= 0.8);
  CHECK(o.ratio <= 1.2);

  SweepConfig z = small_config();
  z.values = {0.0};
  z.lambda_scale = 1e-6;
  auto oz = oracle_comparison(z, 0.0);
  CHECK(oz.mean_oracle_mse <= 1e-20);
  CHECK(oz.theory == 0.0);
  CHECK(oz.ratio == 1.0);
}

TEST_CASE("denoiser does not beat the oracle on matched seeds") {
  SweepConfig c = small_config();
  c.M = 10;
  c.values = {0.1};
  c.trials = 4;
  auto res = sweep(c, 1);
  auto o = oracle_comparison(c, 0.1);
  CHECK(res.points[0].mean_mse >= o.mean_oracle_mse);
}
