#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "csuq/fourier_ops.hpp"
#include "csuq/lasso.hpp"
#include "csuq/simulation.hpp"
#include "csuq/uq.hpp"

namespace csuq {

struct ExperimentConfig {
  double n_fraction = 0.4;
  double sigma = 1000.0;
  double alpha = 0.05;
  double threshold = 200.0;
  /// Fixed multiple of lambda_0; cross validation is used when empty.
  std::optional<double> lambda_multiple = 25.0;
  std::size_t trials = 100;
  std::uint64_t master_seed = 0;
  SamplingMode sampling_mode = SamplingMode::kWithReplacement;
  /// Use `sigma` for lambda_0 and the radius; otherwise estimate it from residuals.
  bool sigma_known = true;
  double K = 1.0;
  LambdaScale lambda_scale = LambdaScale::kSumOfSquares;
  std::vector<double> cv_multiples = kDefaultCvMultiples;
  std::size_t cv_folds = 5;
  SolverOptions solver;
  std::size_t threads = 1;

  /// n = round(n_fraction * p); throws unless n >= 1.
  std::size_t measurements(std::size_t p) const;
  void validate() const;
};

struct TrialMetrics {
  double h = 0.0;
  double h_S0 = 0.0;
  double ssim = 0.0;
  double r_linf = 0.0;
  double relative_noise = 0.0;
  double lambda_used = 0.0;
  double sigma_hat = 0.0;
  double radius = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool failed = false;
  std::string error;
};

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;
};

struct ExperimentAggregate {
  MetricSummary h, h_S0, ssim, r_linf, relative_noise, lambda_used, sigma_hat;
  std::size_t successful = 0;
  std::size_t failed = 0;
  std::size_t unconverged = 0;
};

struct ExperimentResult {
  std::vector<TrialMetrics> per_trial;
  ExperimentAggregate aggregate;
  ExperimentConfig config_echo;
  std::size_t p = 0;
  std::size_t n = 0;
  std::size_t s0 = 0;
  /// At least 95% of trials succeeded.
  bool valid = false;
  /// Last successful trial, kept for plotting.
  ComplexSignal reconstruction;  // beta_u
  ComplexSignal beta_hat;
  ConfidenceRegions regions;
};

/// Mean and sample standard deviation over successful trials, in trial order.
ExperimentAggregate aggregate(const std::vector<TrialMetrics>& trials);

/// Runs the full pipeline once per trial: draw a pattern, simulate y, fix or
/// estimate sigma, choose lambda (fixed multiple or CV), solve, debias, build
/// regions and score them against the ground truth.
ExperimentResult run_experiment(const ExperimentConfig& config, const GroundTruth& truth);

struct TableRow {
  double threshold = 0.0;
  std::size_t s0 = 0;
  double h_S0 = 0.0;
  double h = 0.0;
  double ssim = 0.0;
  bool valid = false;
};

/// Produces the ground truth for table row `row` (configs are visited in order).
using GroundTruthSource = std::function<GroundTruth(const ExperimentConfig& config, std::size_t row)>;

/// One aggregated row per config, in the given order. All configs must
/// produce ground truths of the same dimension.
std::vector<TableRow> run_table(const std::vector<ExperimentConfig>& configs, const GroundTruthSource& source);

/// Columns threshold,s0,h_S0,h,ssim.
void write_table_csv(std::ostream& os, const std::vector<TableRow>& rows);

}  // namespace csuq
