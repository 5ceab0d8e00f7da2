#pragma once

// Monte Carlo scaling studies: seeded trials, a parallel sweep runner, aggregation,
// least-squares scaling fits and the oracle least-squares comparison.

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "modwave/model.hpp"
#include "modwave/solver.hpp"

namespace modwave {

enum class SweepVariable { N, Sigma, J, K };
enum class FreqsMode { Fixed, GridRandom };

std::string to_string(SweepVariable v);
SweepVariable parse_sweep_variable(const std::string& s);
std::string to_string(FreqsMode m);
FreqsMode parse_freqs_mode(const std::string& s);

struct SweepConfig {
  SweepVariable variable = SweepVariable::Sigma;
  std::vector<double> values;
  int M = 20;
  int J = 3;
  int K = 4;
  double sigma = 0.1;
  double eta = 0.5;
  int trials = 50;
  std::uint64_t base_seed = 20170601;
  FreqsMode freqs_mode = FreqsMode::Fixed;
  std::vector<double> freqs{0.1, 0.15, 0.5};
  std::vector<double> amps{1.0, 2.0, 3.0};
  /// Absolute lambda, bypassing the sigma rule (needed when sigma = 0).
  std::optional<double> lambda;
  /// lambda = lambda_scale * ||B||_F; ignored when `lambda` is set.
  std::optional<double> lambda_scale;
  bool localize = false;
  double localize_threshold = 0.99;
  AdmmConfig admm;

  /// Throws DomainError naming the offending field.
  void validate() const;
};

/// Parameters of one sweep point after substituting the swept value.
struct TrialParams {
  int M, K, J;
  double sigma;
  std::vector<double> amps;
};
TrialParams resolve(const SweepConfig& config, double value);

std::uint64_t trial_seed(std::uint64_t base_seed, double value, int trial_index);

/// Subspace, truth and noisy samples for one trial; identical across calls.
SignalInstance trial_instance(const SweepConfig& config, double value, int trial_index);

struct ExperimentRecord {
  SweepVariable variable = SweepVariable::Sigma;
  double value = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  int N = 0;
  double lambda = 0.0;
  double mse = 0.0;
  double raw_mse = 0.0;  // (1/N) ||y - x*||^2
  bool converged = false;
  int iterations = 0;
  std::vector<double> localization_errors;  // per true frequency, distance to nearest peak (1.0 if none)
  bool localized = false;                   // every error below 0.5/N
  double wall_time = 0.0;
};

ExperimentRecord run_trial(const SweepConfig& config, double value, int trial_index, AdmmSolver* solver = nullptr);

struct AggregatePoint {
  double value = 0.0;
  double mean_mse = 0.0;
  double std_mse = 0.0;
  double scaled_mse = 0.0;
  double mean_raw_mse = 0.0;
  int trials = 0;
  int converged = 0;
  int localized = 0;
};

struct SweepResult {
  std::vector<ExperimentRecord> records;  // ordered by value, then trial
  std::vector<AggregatePoint> points;
};

using SweepProgress = std::function<void(const ExperimentRecord&)>;

/// jobs <= 0 uses the hardware concurrency. Output is independent of jobs.
SweepResult sweep(const SweepConfig& config, int jobs = 1, const SweepProgress& progress = {});

/// Mean and sample standard deviation of the records' MSE, sorted by trial first.
AggregatePoint aggregate(SweepVariable variable, double value, std::vector<ExperimentRecord> records, int N);

/// J log J with the logarithm clamped below at one: J max(log J, 1).
double clamped_jlogj(double x);
/// Predictor of the scaling law for the swept variable at the given value (N uses 4M+1).
double predictor_value(SweepVariable variable, double value);
std::string predictor_name(SweepVariable variable);

struct ScalingFit {
  std::string predictor;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// OLS of y on x. Needs at least four points; throws DomainError on a degenerate predictor.
ScalingFit fit_scaling(const std::vector<double>& x, const std::vector<double>& y, const std::string& predictor = "x");
ScalingFit fit_scaling(const std::vector<AggregatePoint>& points, SweepVariable variable);

struct OracleComparison {
  double mean_oracle_mse = 0.0;
  double theory = 0.0;  // sigma^2 K J / N
  double ratio = 1.0;   // mean / theory; 1 when sigma = 0
  int trials = 0;
};

/// Oracle least squares over config.trials trials at the given sweep value, on the same
/// seeds as run_trial.
OracleComparison oracle_comparison(const SweepConfig& config, double value);

void write_trials_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);
void write_aggregate_csv(std::ostream& os, const std::vector<AggregatePoint>& points);

}  // namespace modwave
