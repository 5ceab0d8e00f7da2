// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit status 0 only if all pass.
// Usage: acceptance [criterion numbers...]   (default: all thirteen)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "modwave/atomic.hpp"
#include "modwave/certificate.hpp"
#include "modwave/experiments.hpp"
#include "modwave/io.hpp"
#include "modwave/manifest.hpp"
#include "modwave/model.hpp"
#include "modwave/solver.hpp"
#include "support.hpp"

using namespace modwave;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

SweepConfig shipped(const char* name, int trials, std::vector<double> values) {
  SweepConfig c = sweep_config_from_json(read_json_file(std::string(MODWAVE_CONFIG_DIR) + "/" + name));
  c.trials = trials;
  c.values = std::move(values);
  return c;
}

std::string fit_detail(const ScalingFit& f) {
  return fmt("fit vs %s: slope %.4g, intercept %.3g, R^2 %.4f", f.predictor.c_str(), f.slope, f.intercept, f.r_squared);
}

std::string means(const SweepResult& r) {
  std::string s = "mean MSE";
  for (const auto& p : r.points) s += fmt(" %g:%.3e", p.value, p.mean_mse);
  return s;
}

// ---- 1

Outcome adjoint_identities() {
  CounterRng rng(101);
  double worst_adj = 0, worst_comp = 0;
  for (int t = 0; t < 100; ++t) {
    const int M = 1 + static_cast<int>(rng.below(20));
    const int N = samples_for(M);
    const int K = 1 + static_cast<int>(rng.below(std::min(8, N)));
    const auto S = generate_subspace_rademacher(M, K, rng.next_u64());
    const CMat X = testing::random_cmat(rng, K, N);
    const CVec z = testing::random_cvec(rng, N);
    const CMat Bz = apply_Badj(S, z);
    const cplx lhs = apply_B(S, X).dot(z);  // <B(X), z> with conjugation on B(X)
    const cplx rhs = (X.adjoint() * Bz).trace();
    worst_adj = std::max(worst_adj, std::abs(lhs - rhs) / (X.norm() * Bz.norm()));

    const int J = 1 + static_cast<int>(rng.below(std::min(M, 4)));
    const auto truth = testing::random_truth(rng, J, K, 1.0 / N);
    const CVec x = generate_signal(S, truth);
    worst_comp = std::max(worst_comp, (apply_B(S, lift_truth(truth, S)) - x).norm() / x.norm());
  }
  return {worst_adj <= 1e-12 && worst_comp <= 1e-12,
          fmt("max relative defect: adjoint %.2e, B(lift) vs model %.2e", worst_adj, worst_comp)};
}

// ---- 2

// Independent brute force: exhaustive grid, then nested exhaustive grids around the best cells.
double brute_dual_norm(const CMat& Q, int L) {
  const int N = static_cast<int>(Q.cols()), M = (N - 1) / 4;
  auto value = [&](double tau) {
    CVec acc = CVec::Zero(Q.rows());
    for (int i = 0; i < N; ++i) acc += Q.col(i) * std::polar(1.0, kTwoPi * tau * (i - 2 * M));
    return acc.norm();
  };
  std::vector<double> g(L);
  for (int l = 0; l < L; ++l) g[l] = value(double(l) / L);
  std::vector<int> cand;
  for (int l = 0; l < L; ++l)
    if (g[l] >= g[(l + L - 1) % L] && g[l] >= g[(l + 1) % L]) cand.push_back(l);
  std::sort(cand.begin(), cand.end(), [&](int a, int b) { return g[a] > g[b]; });
  if (cand.size() > 4) cand.resize(4);
  double best = *std::max_element(g.begin(), g.end());
  for (int l : cand) {
    double center = double(l) / L, half = 1.0 / L;
    for (int round = 0; round < 5; ++round) {
      double bt = center, bv = -1;
      for (int s = 0; s <= 200; ++s) {
        const double t = center - half + 2 * half * s / 200.0;
        const double v = value(t);
        if (v > bv) bv = v, bt = t;
      }
      best = std::max(best, bv);
      center = bt;
      half /= 50;
    }
  }
  return best;
}

Outcome dual_norm_oracle() {
  CounterRng rng(202);
  const int M = 10, N = samples_for(M), K = 4;
  const int L = 100 * dual_norm_grid_size(N);
  double worst = 0;
  int bound_ok = 0;
  for (int t = 0; t < 30; ++t) {
    const CMat Q = testing::random_cmat(rng, K, N);
    const double refined = dual_norm(Q).value;
    const double brute = brute_dual_norm(Q, L);
    worst = std::max(worst, std::abs(refined - brute) / brute);
    bound_ok += certified_dual_norm_bound(Q, dual_norm_grid_size(N)) >= refined;
  }
  return {worst <= 1e-8 && bound_ok == 30,
          fmt("max relative gap to brute force %.2e, certified bound >= value on %d/30", worst, bound_ok)};
}

// ---- 3

Outcome bernstein() {
  CounterRng rng(303);
  double worst1 = 0, worst2 = 0;
  for (int t = 0; t < 50; ++t) {
    const int M = 1 + static_cast<int>(rng.below(20));
    const int K = 1 + static_cast<int>(rng.below(8));
    const auto r = bernstein_check(testing::random_cmat(rng, K, samples_for(M)));
    worst1 = std::max(worst1, r.first);
    worst2 = std::max(worst2, r.second);
  }
  return {worst1 <= 1 + 1e-6 && worst2 <= 1 + 1e-6, fmt("max ratios: first %.6f, second %.6f", worst1, worst2)};
}

// ---- 4

Outcome solver_cross_validation() {
  CounterRng rng(404);
  double worst_rel = 0, worst_slack = 1e300, worst_gap = 0;
  bool all_converged = true;
  for (int t = 0; t < 10; ++t) {
    const int M = t < 5 ? 1 : 2;
    const int K = 1 + t % 2;
    const int N = samples_for(M);
    const auto S = generate_subspace_rademacher(M, K, rng.next_u64());
    const int J = 1 + static_cast<int>(rng.below(M));
    const auto truth = testing::random_truth(rng, J, K, 1.0 / N);
    const CVec y = add_noise(generate_signal(S, truth), 0.1, rng.next_u64());
    const DenoiseProblem p{y, S, regularization_lambda(0.1, S, 0.5)};
    const auto sol = solve_admm(p);
    all_converged &= sol.converged;
    const auto ref = reference_solver(p, 64);
    worst_rel = std::max(worst_rel, std::abs(sol.objective - ref.objective) / ref.objective);
    const auto kkt = check_optimality(p, sol);
    worst_slack = std::min(worst_slack, kkt.cond1_slack / p.lambda);
    worst_gap = std::max(worst_gap, kkt.cond2_gap);
  }
  return {all_converged && worst_rel <= 1e-3 && worst_slack >= -1e-3 && worst_gap <= 1e-3,
          fmt("max relative objective difference %.2e, min cond1_slack/lambda %.2e, max cond2_gap %.2e",
              worst_rel, worst_slack, worst_gap)};
}

// ---- 5

Outcome noiseless_recovery() {
  SweepConfig c = shipped("sweep_sigma.json", 5, {0.0});
  c.lambda_scale = 1e-6;
  const auto r = sweep(c, jobs());
  double worst = 0;
  for (const auto& rec : r.records) worst = std::max(worst, rec.mse);
  return {worst <= 1e-6, fmt("max MSE over 5 seeds %.2e", worst)};
}

// ---- 6

Outcome oracle_rate() {
  SweepConfig c = shipped("oracle.json", 200, {0.1});
  const auto o = oracle_comparison(c, 0.1);
  const bool setup = c.K == 4 && c.J == 3 && samples_for(c.M) == 81;
  return {setup && std::abs(o.ratio - 1.0) <= 0.2,
          fmt("mean oracle MSE %.4e vs sigma^2 K J / N = %.4e (ratio %.3f)", o.mean_oracle_mse, o.theory, o.ratio)};
}

// ---- 7, 13

std::vector<double> sigma_values() {
  std::vector<double> v;
  for (int i = 1; i <= 10; ++i) v.push_back(0.025 * i);
  return v;
}

std::string sigma_sweep_csv(SweepResult* out = nullptr) {
  const auto r = sweep(shipped("sweep_sigma.json", 20, sigma_values()), jobs());
  std::ostringstream os;
  write_aggregate_csv(os, r.points);
  if (out) *out = r;
  return os.str();
}

std::string first_csv;

Outcome sigma_scaling() {
  SweepResult r;
  first_csv = sigma_sweep_csv(&r);
  const auto f = fit_scaling(r.points, SweepVariable::Sigma);
  return {f.r_squared >= 0.95 && f.slope > 0, fit_detail(f)};
}

Outcome determinism() {
  if (first_csv.empty()) first_csv = sigma_sweep_csv();
  const std::string again = sigma_sweep_csv();
  return {again == first_csv, fmt("aggregate CSV sha256 %s vs %s", sha256_hex(first_csv).substr(0, 16).c_str(),
                                  sha256_hex(again).substr(0, 16).c_str())};
}

// ---- 8

Outcome n_scaling() {
  const auto r = sweep(shipped("sweep_n.json", 20, {10, 20, 40, 60, 80, 100}), jobs());
  bool decreasing = true;
  for (std::size_t i = 1; i < r.points.size(); ++i) decreasing &= r.points[i].mean_mse < r.points[i - 1].mean_mse;
  const auto f = fit_scaling(r.points, SweepVariable::N);
  return {decreasing && f.r_squared >= 0.90,
          fit_detail(f) + (decreasing ? ", strictly decreasing; " : ", NOT strictly decreasing; ") + means(r)};
}

// ---- 9, 10

Outcome k_scaling() {
  const auto r = sweep(shipped("sweep_k.json", 20, {1, 2, 3, 4, 5, 6, 7, 8}), jobs());
  const auto f = fit_scaling(r.points, SweepVariable::K);
  return {f.r_squared >= 0.85, fit_detail(f) + "; " + means(r)};
}

Outcome j_scaling() {
  const auto c = shipped("sweep_j.json", 20, {1, 2, 3, 4, 5, 6});
  const auto r = sweep(c, jobs());
  const auto f = fit_scaling(r.points, SweepVariable::J);
  const bool setup = c.freqs_mode == FreqsMode::GridRandom;
  return {setup && f.r_squared >= 0.80, fit_detail(f) + "; " + means(r)};
}

// ---- 11

Outcome certificate_validity() {
  CounterRng rng(20170611);
  const int M = 20, N = samples_for(M);
  int far_ok = 0;
  double worst_defect = 0;
  bool threw = false;
  for (int t = 0; t < 20; ++t) {
    const int J = 1 + static_cast<int>(rng.below(4));
    const int K = 1 + static_cast<int>(rng.below(4));
    const auto S = generate_subspace_rademacher(M, K, rng.next_u64());
    const auto truth = testing::random_truth(rng, J, K, 1.0 / N);
    try {
      const auto res = construct_certificate(truth, S);
      for (const auto& s : res.report.support) worst_defect = std::max(worst_defect, s.defect);
      far_ok += res.report.far_max < 1.0;
    } catch (const NumericalError&) {
      threw = true;
    }
  }
  return {!threw && worst_defect <= 1e-8 && far_ok >= 18,
          fmt("far_max < 1 on %d/20, max interpolation defect %.2e%s", far_ok, worst_defect,
              threw ? ", singular system encountered" : "")};
}

// ---- 12

Outcome localization() {
  SweepConfig c = shipped("sweep_sigma.json", 50, {0.1});
  c.localize = true;
  const auto r = sweep(c, jobs());
  int ok = 0;
  double worst = 0;
  for (const auto& rec : r.records) {
    ok += rec.localized;
    for (double e : rec.localization_errors) worst = std::max(worst, e * rec.N);
  }
  return {ok >= 45, fmt("all frequencies within 0.5/N in %d/50 trials (largest error %.3f/N)", ok, worst)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "adjoint and composition identities", 1, adjoint_identities},
      {2, "dual norm vs brute-force oracle", 30, dual_norm_oracle},
      {3, "Bernstein derivative ratios", 30, bernstein},
      {4, "ADMM vs reference solver and optimality conditions", 120, solver_cross_validation},
      {5, "noiseless recovery", 120, noiseless_recovery},
      {6, "oracle least-squares rate", 10, oracle_rate},
      {7, "MSE scales linearly with sigma^2", 15 * 60, sigma_scaling},
      {8, "MSE scales with log(N)/N", 30 * 60, n_scaling},
      {9, "MSE scales with K log K", 20 * 60, k_scaling},
      {10, "MSE scales with J log J", 20 * 60, j_scaling},
      {11, "interpolating dual certificate validity", 5 * 60, certificate_validity},
      {12, "frequency localization", 15 * 60, localization},
      {13, "sweep determinism", 15 * 60, determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0, ran = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("[%s] %2d %s: %s (%.2f s of %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), dt,
                c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
