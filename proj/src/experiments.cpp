#include "modwave/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include "modwave/certificate.hpp"
#include "modwave/rng.hpp"

namespace modwave {

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::N: return "N";
    case SweepVariable::Sigma: return "sigma";
    case SweepVariable::J: return "J";
    case SweepVariable::K: return "K";
  }
  return "?";
}

SweepVariable parse_sweep_variable(const std::string& s) {
  if (s == "N" || s == "M") return SweepVariable::N;
  if (s == "sigma") return SweepVariable::Sigma;
  if (s == "J") return SweepVariable::J;
  if (s == "K") return SweepVariable::K;
  throw DomainError("variable: expected one of N, sigma, J, K (got '" + s + "')");
}

std::string to_string(FreqsMode m) { return m == FreqsMode::Fixed ? "fixed" : "grid_random"; }

FreqsMode parse_freqs_mode(const std::string& s) {
  if (s == "fixed") return FreqsMode::Fixed;
  if (s == "grid_random") return FreqsMode::GridRandom;
  throw DomainError("freqs_mode: expected fixed or grid_random (got '" + s + "')");
}

namespace {

bool is_integer(double v) { return std::floor(v) == v; }

}  // namespace

void SweepConfig::validate() const {
  if (values.empty()) throw DomainError("values: must be nonempty");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) throw DomainError("values: must be strictly increasing");
  if (trials < 1) throw DomainError("trials: must be at least 1");
  if (M < 1) throw DomainError("M: must be at least 1");
  if (J < 1) throw DomainError("J: must be at least 1");
  if (K < 1) throw DomainError("K: must be at least 1");
  if (!(sigma >= 0.0)) throw DomainError("sigma: must be nonnegative");
  if (!(eta > 0.0)) throw DomainError("eta: must be positive");
  if (lambda && !(*lambda > 0.0)) throw DomainError("lambda: must be positive");
  if (lambda_scale && !(*lambda_scale > 0.0)) throw DomainError("lambda_scale: must be positive");
  if (!(localize_threshold > 0.0 && localize_threshold < 1.0)) throw DomainError("localize_threshold: must lie in (0,1)");
  admm.validate();
  for (double v : values) {
    if (variable == SweepVariable::Sigma) {
      if (!(v >= 0.0)) throw DomainError("values: sigma must be nonnegative");
    } else if (!is_integer(v) || v < 1.0) {
      throw DomainError("values: " + to_string(variable) + " values must be positive integers");
    }
    const TrialParams p = resolve(*this, v);
    if (p.K > samples_for(p.M)) throw DomainError("K: exceeds N");
    if (!lambda && !lambda_scale && p.sigma == 0.0)
      throw DomainError("lambda: sigma = 0 needs an explicit lambda or lambda_scale");
    if (freqs_mode == FreqsMode::Fixed) {
      if (freqs.size() != static_cast<std::size_t>(p.J))
        throw DomainError("freqs: fixed mode needs exactly J frequencies");
      for (double f : freqs)
        if (!(f >= 0.0 && f < 1.0)) throw DomainError("freqs: must lie in [0,1)");
    } else if (p.J > p.M) {
      throw DomainError("J: grid_random mode needs J <= M");
    }
    if (p.amps.size() != static_cast<std::size_t>(p.J)) throw DomainError("amps: needs exactly J amplitudes");
    for (double c : p.amps)
      if (!(c > 0.0)) throw DomainError("amps: must be positive");
  }
}

TrialParams resolve(const SweepConfig& config, double value) {
  TrialParams p{config.M, config.K, config.J, config.sigma, config.amps};
  switch (config.variable) {
    case SweepVariable::N: p.M = static_cast<int>(value); break;
    case SweepVariable::Sigma: p.sigma = value; break;
    case SweepVariable::K: p.K = static_cast<int>(value); break;
    case SweepVariable::J:
      p.J = static_cast<int>(value);
      p.amps.clear();
      for (int j = 1; j <= p.J; ++j) p.amps.push_back(static_cast<double>(j));
      break;
  }
  return p;
}

std::uint64_t trial_seed(std::uint64_t base_seed, double value, int trial_index) {
  return hash_combine(hash_combine(base_seed, std::bit_cast<std::uint64_t>(value)),
                      static_cast<std::uint64_t>(trial_index));
}

SignalInstance trial_instance(const SweepConfig& config, double value, int trial_index) {
  const TrialParams p = resolve(config, value);
  const std::uint64_t seed = trial_seed(config.base_seed, value, trial_index);
  Subspace sub = generate_subspace_rademacher(p.M, p.K, stream_seed(seed, Stream::Subspace));
  GroundTruth truth;
  truth.freqs = config.freqs_mode == FreqsMode::Fixed
                    ? config.freqs
                    : random_grid_frequencies(p.J, p.M, stream_seed(seed, Stream::Frequency));
  truth.amps = p.amps;
  truth.waveform_coeffs = random_waveforms(p.J, p.K, stream_seed(seed, Stream::Waveform));
  SignalInstance inst = make_instance(std::move(sub), std::move(truth), p.sigma, stream_seed(seed, Stream::Noise));
  inst.seed = seed;
  return inst;
}

ExperimentRecord run_trial(const SweepConfig& config, double value, int trial_index, AdmmSolver* solver) {
  const auto t0 = std::chrono::steady_clock::now();
  const SignalInstance inst = trial_instance(config, value, trial_index);
  const TrialParams p = resolve(config, value);
  const int N = inst.subspace.n_samples();

  DenoiseProblem problem;
  problem.y = inst.noisy;
  problem.subspace = inst.subspace;
  if (config.lambda) problem.lambda = *config.lambda;
  else if (config.lambda_scale) problem.lambda = *config.lambda_scale * inst.subspace.frobenius_norm();
  else problem.lambda = regularization_lambda(p.sigma, inst.subspace, config.eta);

  SdpSolution sol;
  if (solver) {
    sol = solver->solve(problem);
  } else {
    AdmmSolver local(config.admm);
    sol = local.solve(problem);
  }

  ExperimentRecord rec;
  rec.variable = config.variable;
  rec.value = value;
  rec.trial = trial_index;
  rec.seed = inst.seed;
  rec.N = N;
  rec.lambda = problem.lambda;
  rec.mse = (sol.x_hat - inst.clean).squaredNorm() / N;
  rec.raw_mse = (inst.noisy - inst.clean).squaredNorm() / N;
  rec.converged = sol.converged;
  rec.iterations = sol.iterations;

  if (config.localize) {
    const auto peaks = localize(residual_certificate(problem, sol), config.localize_threshold);
    rec.localized = true;
    for (double f : inst.truth.freqs) {
      double err = 1.0;
      for (const auto& pk : peaks) err = std::min(err, wrap_distance(f, pk.tau));
      rec.localization_errors.push_back(err);
      rec.localized = rec.localized && err <= 0.5 / N;
    }
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

double clamped_jlogj(double x) { return x * std::max(std::log(x), 1.0); }

double predictor_value(SweepVariable variable, double value) {
  switch (variable) {
    case SweepVariable::N: {
      const double N = samples_for(static_cast<int>(value));
      return std::log(N) / N;
    }
    case SweepVariable::Sigma: return value * value;
    case SweepVariable::J:
    case SweepVariable::K: return clamped_jlogj(value);
  }
  return 0.0;
}

std::string predictor_name(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::N: return "log(N)/N";
    case SweepVariable::Sigma: return "sigma^2";
    case SweepVariable::J: return "J*max(log J,1)";
    case SweepVariable::K: return "K*max(log K,1)";
  }
  return "?";
}

AggregatePoint aggregate(SweepVariable variable, double value, std::vector<ExperimentRecord> records, int N) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.trial < b.trial; });
  AggregatePoint pt;
  pt.value = value;
  pt.trials = static_cast<int>(records.size());
  if (records.empty()) return pt;
  double s = 0.0, raw = 0.0;
  for (const auto& r : records) {
    s += r.mse;
    raw += r.raw_mse;
    pt.converged += r.converged ? 1 : 0;
    pt.localized += r.localized ? 1 : 0;
  }
  pt.mean_mse = s / pt.trials;
  pt.mean_raw_mse = raw / pt.trials;
  if (pt.trials > 1) {
    double v = 0.0;
    for (const auto& r : records) v += (r.mse - pt.mean_mse) * (r.mse - pt.mean_mse);
    pt.std_mse = std::sqrt(v / (pt.trials - 1));
  }
  switch (variable) {
    case SweepVariable::N: pt.scaled_mse = pt.mean_mse * N / std::log(static_cast<double>(N)); break;
    case SweepVariable::Sigma: pt.scaled_mse = value > 0.0 ? pt.mean_mse / (value * value) : std::nan(""); break;
    case SweepVariable::J:
    case SweepVariable::K: pt.scaled_mse = pt.mean_mse / clamped_jlogj(value); break;
  }
  return pt;
}

SweepResult sweep(const SweepConfig& config, int jobs, const SweepProgress& progress) {
  config.validate();
  const std::size_t nv = config.values.size();
  const std::size_t nt = static_cast<std::size_t>(config.trials);
  const std::size_t total = nv * nt;
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), total));

  std::vector<ExperimentRecord> records(total);
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  auto worker = [&]() {
    AdmmSolver solver(config.admm);
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      try {
        records[task] = run_trial(config, config.values[task / nt], static_cast<int>(task % nt), &solver);
        if (progress) {
          std::lock_guard<std::mutex> lock(progress_mutex);
          progress(records[task]);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SweepResult res;
  res.records = std::move(records);
  for (std::size_t v = 0; v < nv; ++v) {
    std::vector<ExperimentRecord> chunk(res.records.begin() + static_cast<std::ptrdiff_t>(v * nt),
                                        res.records.begin() + static_cast<std::ptrdiff_t>((v + 1) * nt));
    const int N = chunk.front().N;
    res.points.push_back(aggregate(config.variable, config.values[v], std::move(chunk), N));
  }
  return res;
}

ScalingFit fit_scaling(const std::vector<double>& x, const std::vector<double>& y, const std::string& predictor) {
  if (x.size() != y.size()) throw DimensionError("fit_scaling: x and y lengths differ");
  const std::size_t n = x.size();
  if (n < 4) throw DomainError("fit_scaling: need at least 4 points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 1e-300 * std::max(1.0, mx * mx))) throw DomainError("fit_scaling: degenerate predictor values");
  ScalingFit fit;
  fit.predictor = predictor;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - (fit.intercept + fit.slope * x[i]);
      sse += e * e;
    }
    fit.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  }
  return fit;
}

ScalingFit fit_scaling(const std::vector<AggregatePoint>& points, SweepVariable variable) {
  std::vector<double> x, y;
  for (const auto& p : points) {
    x.push_back(predictor_value(variable, p.value));
    y.push_back(p.mean_mse);
  }
  return fit_scaling(x, y, predictor_name(variable));
}

OracleComparison oracle_comparison(const SweepConfig& config, double value) {
  config.validate();
  const TrialParams p = resolve(config, value);
  const int N = samples_for(p.M);
  OracleComparison out;
  out.trials = config.trials;
  double s = 0.0;
  for (int t = 0; t < config.trials; ++t) {
    const SignalInstance inst = trial_instance(config, value, t);
    s += oracle_lsq(inst.noisy, inst.subspace, inst.truth.freqs, inst.clean).mse;
  }
  out.mean_oracle_mse = s / config.trials;
  out.theory = p.sigma * p.sigma * p.K * p.J / N;
  out.ratio = p.sigma == 0.0 ? 1.0 : out.mean_oracle_mse / out.theory;
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_trials_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  os << "variable,value,trial,seed,mse,converged,iters,wall_time\n";
  for (const auto& r : records) {
    os << to_string(r.variable) << ',' << fmt(r.value) << ',' << r.trial << ',' << r.seed << ',' << fmt(r.mse) << ','
       << (r.converged ? 1 : 0) << ',' << r.iterations << ',' << fmt(r.wall_time) << '\n';
  }
}

void write_aggregate_csv(std::ostream& os, const std::vector<AggregatePoint>& points) {
  os << "value,mean_mse,std_mse,scaled_mse\n";
  for (const auto& p : points)
    os << fmt(p.value) << ',' << fmt(p.mean_mse) << ',' << fmt(p.std_mse) << ',' << fmt(p.scaled_mse) << '\n';
}

}  // namespace modwave
