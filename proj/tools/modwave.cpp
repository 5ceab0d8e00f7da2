// modwave: generate, denoise, localize, certify, sweep, oracle.
// Exit codes: 0 ok, 2 usage or input error, 3 solver did not converge, 4 certificate failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "modwave/certificate.hpp"
#include "modwave/experiments.hpp"
#include "modwave/io.hpp"
#include "modwave/manifest.hpp"
#include "modwave/rng.hpp"

namespace fs = std::filesystem;
using namespace modwave;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kNotConverged = 3;
constexpr int kCertFailed = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path manifest_path(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw UsageError(dir.string() + ": cannot create output directory");
  const fs::path probe = dir / ".modwave_write_probe";
  {
    std::ofstream p(probe);
    if (!p) throw UsageError(dir.string() + ": output directory is not writable");
  }
  fs::remove(probe, ec);
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("MODWAVE_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (s[used] != '\0') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("MODWAVE_SEED: not an unsigned integer: ") + s);
  }
}

// ---- gen

struct GenArgs {
  fs::path config, out_dir = ".";
  std::optional<double> sigma;
  std::optional<std::uint64_t> seed;
};

int cmd_gen(const GenArgs& a) {
  RunManifest man;
  man.command = "gen";
  man.started_at = utc_timestamp();
  const json cfg = read_json_file(a.config);
  if (!cfg.is_object()) throw FormatError("config: expected a JSON object");
  auto need = [&](const char* key) -> const json& {
    if (!cfg.contains(key)) throw FormatError(std::string(key) + ": missing field");
    return cfg[key];
  };
  int M, K;
  double sigma;
  std::uint64_t seed;
  std::string mode = "fixed";
  std::vector<double> freqs, amps;
  try {
    M = need("M").get<int>();
    K = need("K").get<int>();
    sigma = need("sigma").get<double>();
    seed = need("seed").get<std::uint64_t>();
    amps = need("amps").get<std::vector<double>>();
    if (cfg.contains("freqs_mode")) mode = cfg["freqs_mode"].get<std::string>();
    if (mode == "fixed") freqs = need("freqs").get<std::vector<double>>();
    else if (mode != "grid_random") throw FormatError("freqs_mode: expected fixed or grid_random");
  } catch (const json::exception& e) {
    throw FormatError(std::string("config: wrong field type (") + e.what() + ")");
  }
  if (a.sigma) sigma = *a.sigma;
  if (a.seed) seed = *a.seed;
  if (M < 1) throw FormatError("M: must be at least 1");
  if (K < 1 || K > samples_for(M)) throw FormatError("K: must lie in [1, 4M+1]");
  if (!(sigma >= 0.0)) throw FormatError("sigma: must be nonnegative");
  const int J = static_cast<int>(amps.size());
  if (J < 1) throw FormatError("amps: must be nonempty");
  if (mode == "grid_random") {
    if (J > M) throw FormatError("amps: grid_random mode needs J <= M");
    freqs = random_grid_frequencies(J, M, stream_seed(seed, Stream::Frequency));
  }
  if (freqs.size() != amps.size()) throw FormatError("freqs: needs one frequency per amplitude");

  GroundTruth truth{freqs, amps, random_waveforms(J, K, stream_seed(seed, Stream::Waveform))};
  try {
    truth.validate(K);
  } catch (const std::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  const SignalInstance inst = make_instance(generate_subspace_rademacher(M, K, stream_seed(seed, Stream::Subspace)),
                                            truth, sigma, stream_seed(seed, Stream::Noise));
  ensure_dir(a.out_dir);
  const fs::path signal = a.out_dir / "signal.csv", clean = a.out_dir / "clean.csv",
                 subspace = a.out_dir / "subspace.csv", truth_file = a.out_dir / "truth.json";
  write_signal_csv(signal, inst.noisy);
  write_signal_csv(clean, inst.clean);
  write_subspace_csv(subspace, inst.subspace);
  json tj = truth_to_json(inst.truth, M, K, seed);
  tj["sigma"] = sigma;
  write_json_file(truth_file, tj);

  man.config = cfg;
  man.config["sigma"] = sigma;
  man.config["seed"] = seed;
  man.seeds = {seed};
  man.inputs = {a.config};
  man.outputs = {signal, clean, subspace, truth_file};
  man.finished_at = utc_timestamp();
  man.write(a.out_dir / "manifest.json");
  std::cout << "wrote " << signal.string() << " (" << inst.noisy.size() << " samples)\n";
  return kOk;
}

// ---- denoise

struct DenoiseArgs {
  fs::path signal, subspace, out = "solution.json";
  std::optional<double> sigma, eta, lambda;
  AdmmConfig admm;
};

std::pair<CVec, Subspace> load_problem_data(const fs::path& signal, const fs::path& subspace) {
  CVec y = read_signal_csv(signal);
  Subspace sub = read_subspace_csv(subspace);
  if (y.size() != sub.n_samples())
    throw UsageError("signal has " + std::to_string(y.size()) + " samples but subspace has " +
                     std::to_string(sub.n_samples()));
  return {std::move(y), std::move(sub)};
}

int cmd_denoise(const DenoiseArgs& a) {
  RunManifest man;
  man.command = "denoise";
  man.started_at = utc_timestamp();
  if (a.lambda.has_value() == a.sigma.has_value())
    throw UsageError("give exactly one of --lambda or --sigma (with optional --eta)");
  if (a.eta && !a.sigma) throw UsageError("--eta needs --sigma");
  if (a.lambda && !(*a.lambda > 0.0)) throw UsageError("--lambda must be positive");
  auto [y, sub] = load_problem_data(a.signal, a.subspace);
  DenoiseProblem problem{y, sub, 0.0};
  const double eta = a.eta.value_or(0.5);
  try {
    problem.lambda = a.lambda ? *a.lambda : regularization_lambda(*a.sigma, sub, eta);
    problem.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const SdpSolution sol = solve_admm(problem, a.admm);
  write_json_file(a.out, solution_to_json(sol));

  man.config = {{"lambda", problem.lambda},
                {"sigma", a.sigma ? json(*a.sigma) : json(nullptr)},
                {"eta", a.sigma ? json(eta) : json(nullptr)},
                {"admm",
                 {{"rho", a.admm.rho},
                  {"max_iters", a.admm.max_iters},
                  {"eps_abs", a.admm.eps_abs},
                  {"eps_rel", a.admm.eps_rel},
                  {"adaptive_rho", a.admm.adaptive_rho},
                  {"relaxation", a.admm.relaxation},
                  {"balance", a.admm.balance}}}};
  man.inputs = {a.signal, a.subspace};
  man.outputs = {a.out};
  man.finished_at = utc_timestamp();
  man.write(manifest_path(a.out));
  std::cout << "objective " << format_double(sol.objective) << " after " << sol.iterations << " iterations"
            << (sol.converged ? "" : " (not converged)") << '\n';
  return sol.converged ? kOk : kNotConverged;
}

// ---- localize

struct LocalizeArgs {
  fs::path signal, subspace, solution, out = "freqs.json";
  double threshold = kDefaultLocalizeThreshold;
};

int cmd_localize(const LocalizeArgs& a) {
  RunManifest man;
  man.command = "localize";
  man.started_at = utc_timestamp();
  if (!(a.threshold > 0.0 && a.threshold < 1.0)) throw UsageError("--threshold must lie in (0,1)");
  auto [y, sub] = load_problem_data(a.signal, a.subspace);
  const json sj = read_json_file(a.solution);
  if (!sj.is_object() || !sj.contains("lambda") || !sj["lambda"].is_number())
    throw UsageError(a.solution.string() + ": solution has no lambda");
  const SdpSolution sol = solution_from_json(sj);
  if (sol.x_hat.size() != y.size()) throw UsageError("solution length differs from the signal");
  if (!(sol.lambda > 0.0)) throw UsageError(a.solution.string() + ": lambda must be positive");
  const DenoiseProblem problem{y, sub, sol.lambda};
  const auto peaks = localize(residual_certificate(problem, sol), a.threshold);
  json arr = json::array();
  for (const auto& p : peaks) arr.push_back({{"tau", p.tau}, {"strength", p.strength}});
  write_json_file(a.out, json{{"freqs", arr}});

  man.config = {{"threshold", a.threshold}, {"lambda", sol.lambda}};
  man.inputs = {a.signal, a.subspace, a.solution};
  man.outputs = {a.out};
  man.finished_at = utc_timestamp();
  man.write(manifest_path(a.out));
  std::cout << peaks.size() << " frequencies\n";
  return kOk;
}

// ---- certify

struct CertifyArgs {
  fs::path truth, subspace, out = "certificate.json";
};

int cmd_certify(const CertifyArgs& a) {
  RunManifest man;
  man.command = "certify";
  man.started_at = utc_timestamp();
  int M = 0, K = 0;
  const GroundTruth truth = truth_from_json(read_json_file(a.truth), &M, &K);
  const Subspace sub = read_subspace_csv(a.subspace);
  if (sub.M() != M || sub.dim() != K) throw UsageError("truth and subspace disagree on M or K");
  CertificateResult res;
  try {
    res = construct_certificate(truth, sub);
  } catch (const NumericalError& e) {
    std::cerr << "certify: " << e.what() << " (condition number " << format_double(e.condition_number()) << ")\n";
    return kCertFailed;
  }
  write_json_file(a.out, certificate_report_to_json(res.report));
  man.inputs = {a.truth, a.subspace};
  man.outputs = {a.out};
  man.finished_at = utc_timestamp();
  man.write(manifest_path(a.out));
  std::cout << "far_max " << format_double(res.report.far_max) << ", condition number "
            << format_double(res.report.condition_number) << '\n';
  return res.report.far_max < 1.0 ? kOk : kCertFailed;
}

// ---- sweep / oracle

struct SweepArgs {
  fs::path config, out_dir = "sweep_out";
  int jobs = 0;
  std::optional<int> trials;
};

SweepConfig load_sweep_config(const fs::path& path, std::optional<int> trials) {
  json j = read_json_file(path);
  if (trials) {
    if (!j.is_object()) throw FormatError("config: expected a JSON object");
    j["trials"] = *trials;
  }
  SweepConfig c = sweep_config_from_json(j);
  if (auto s = env_seed()) c.base_seed = *s;
  return c;
}

int cmd_sweep(const SweepArgs& a) {
  RunManifest man;
  man.command = "sweep";
  man.started_at = utc_timestamp();
  const SweepConfig cfg = load_sweep_config(a.config, a.trials);
  ensure_dir(a.out_dir);
  const int jobs = a.jobs > 0 ? a.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const SweepResult res = sweep(cfg, jobs);

  const fs::path trials = a.out_dir / "trials.csv", agg = a.out_dir / "aggregate.csv", fit = a.out_dir / "fit.json";
  {
    std::ostringstream os;
    write_trials_csv(os, res.records);
    write_text_file(trials, os.str());
  }
  {
    std::ostringstream os;
    write_aggregate_csv(os, res.points);
    write_text_file(agg, os.str());
  }
  json fj;
  if (res.points.size() >= 4) fj = fit_to_json(fit_scaling(res.points, cfg.variable));
  else fj = json{{"predictor", predictor_name(cfg.variable)}, {"note", "fewer than 4 points; no fit"}};
  if (cfg.variable == SweepVariable::J && cfg.values.front() == 1.0) fj["flag"] = "J=1 uses the clamped scaler J*max(log J,1)";
  write_json_file(fit, fj);

  man.config = sweep_config_to_json(cfg);
  man.config["jobs"] = jobs;
  man.seeds = {cfg.base_seed};
  man.inputs = {a.config};
  man.outputs = {trials, agg, fit};
  man.finished_at = utc_timestamp();
  man.write(a.out_dir / "manifest.json");
  int unconverged = 0;
  for (const auto& r : res.records) unconverged += r.converged ? 0 : 1;
  std::cout << res.records.size() << " trials, " << unconverged << " not converged\n";
  return kOk;
}

struct OracleArgs {
  fs::path config, out = "oracle.json";
  std::optional<int> trials;
};

int cmd_oracle(const OracleArgs& a) {
  RunManifest man;
  man.command = "oracle";
  man.started_at = utc_timestamp();
  const SweepConfig cfg = load_sweep_config(a.config, a.trials);
  json arr = json::array();
  for (double v : cfg.values) {
    const OracleComparison oc = oracle_comparison(cfg, v);
    arr.push_back({{"value", v}, {"mean_oracle_mse", oc.mean_oracle_mse}, {"theory", oc.theory}, {"ratio", oc.ratio},
                   {"trials", oc.trials}});
    std::cout << to_string(cfg.variable) << '=' << format_double(v) << " ratio " << format_double(oc.ratio) << '\n';
  }
  write_json_file(a.out, json{{"variable", to_string(cfg.variable)}, {"points", arr}});
  man.config = sweep_config_to_json(cfg);
  man.seeds = {cfg.base_seed};
  man.inputs = {a.config};
  man.outputs = {a.out};
  man.finished_at = utc_timestamp();
  man.write(manifest_path(a.out));
  return kOk;
}

void add_admm_options(CLI::App* sub, AdmmConfig& c) {
  sub->add_option("--rho", c.rho, "initial ADMM penalty")->capture_default_str();
  sub->add_option("--max-iters", c.max_iters, "ADMM iteration cap")->capture_default_str();
  sub->add_option("--eps-abs", c.eps_abs, "absolute tolerance")->capture_default_str();
  sub->add_option("--eps-rel", c.eps_rel, "relative tolerance")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gridless denoising of modulated spectral lines"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a signal, subspace and ground truth from a config");
  g->add_option("config", gen.config, "JSON config")->required()->check(CLI::ExistingFile);
  g->add_option("--out-dir", gen.out_dir, "output directory")->capture_default_str();
  g->add_option("--sigma", gen.sigma, "override the noise level");
  g->add_option("--seed", gen.seed, "override the seed");

  DenoiseArgs den;
  auto* d = app.add_subcommand("denoise", "solve the atomic-norm denoising SDP");
  d->add_option("--signal", den.signal, "signal CSV")->required()->check(CLI::ExistingFile);
  d->add_option("--subspace", den.subspace, "subspace CSV")->required()->check(CLI::ExistingFile);
  d->add_option("--sigma", den.sigma, "noise level for the lambda rule");
  d->add_option("--eta", den.eta, "lambda rule multiplier (default 0.5)");
  d->add_option("--lambda", den.lambda, "explicit regularization weight");
  d->add_option("-o,--out", den.out, "solution JSON")->capture_default_str();
  add_admm_options(d, den.admm);

  LocalizeArgs loc;
  auto* l = app.add_subcommand("localize", "frequencies from the dual polynomial of a solution");
  l->add_option("--signal", loc.signal, "signal CSV")->required()->check(CLI::ExistingFile);
  l->add_option("--subspace", loc.subspace, "subspace CSV")->required()->check(CLI::ExistingFile);
  l->add_option("--solution", loc.solution, "solution JSON")->required()->check(CLI::ExistingFile);
  l->add_option("--threshold", loc.threshold, "peak threshold")->capture_default_str();
  l->add_option("-o,--out", loc.out, "frequencies JSON")->capture_default_str();

  CertifyArgs cer;
  auto* c = app.add_subcommand("certify", "construct and check an interpolating dual certificate");
  c->add_option("--truth", cer.truth, "truth JSON")->required()->check(CLI::ExistingFile);
  c->add_option("--subspace", cer.subspace, "subspace CSV")->required()->check(CLI::ExistingFile);
  c->add_option("-o,--out", cer.out, "report JSON")->capture_default_str();

  SweepArgs swp;
  auto* s = app.add_subcommand("sweep", "run a Monte Carlo scaling sweep");
  s->add_option("config", swp.config, "sweep config JSON")->required()->check(CLI::ExistingFile);
  s->add_option("--out-dir", swp.out_dir, "output directory")->capture_default_str();
  s->add_option("--jobs", swp.jobs, "worker threads (0: all cores)")->capture_default_str();
  s->add_option("--trials", swp.trials, "override trials per value");

  OracleArgs orc;
  auto* o = app.add_subcommand("oracle", "oracle least squares against sigma^2 K J / N");
  o->add_option("config", orc.config, "sweep config JSON")->required()->check(CLI::ExistingFile);
  o->add_option("-o,--out", orc.out, "output JSON")->capture_default_str();
  o->add_option("--trials", orc.trials, "override trials per value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*d) return cmd_denoise(den);
    if (*l) return cmd_localize(loc);
    if (*c) return cmd_certify(cer);
    if (*s) return cmd_sweep(swp);
    if (*o) return cmd_oracle(orc);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsage;
}
