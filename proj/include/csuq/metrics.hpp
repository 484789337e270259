#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "csuq/fourier_ops.hpp"
#include "csuq/lasso.hpp"
#include "csuq/simulation.hpp"
#include "csuq/types.hpp"
#include "csuq/uq.hpp"

namespace csuq {

struct HitRates {
  double h = 0.0;
  double h_S0 = 0.0;
  std::size_t hits = 0;          // coordinates whose region contains beta0
  std::size_t support_hits = 0;  // same, restricted to the support
};

/// Fraction of coordinates (all / on the support) whose region contains beta0_i.
HitRates hit_rates(const ConfidenceRegions& regions, const ComplexSignal& beta0, const IndexSet& support);

/// Mean SSIM over every 8x8 window (clipped to the image size), uniform weights,
/// C1 = (0.01 L)^2 and C2 = (0.03 L)^2.
double ssim(const Image& a, const Image& b, double dynamic_range);

/// Split of sqrt(n) (beta_u - beta0) into the noise term W = X^* eps / sqrt(n)
/// and the bias term R = -sqrt(n) (Sigma_hat - I)(beta_hat - beta0).
struct DecompositionReport {
  ComplexSignal W;
  ComplexSignal R;
  double residual_linf = 0.0;  // || sqrt(n)(beta_u - beta0) - W - R ||_inf
  double r_linf = 0.0;
};

DecompositionReport decompose(const SubsampledFourier& op, const ComplexSignal& y, const ComplexSignal& beta_hat,
                              const ComplexSignal& beta_u, const ComplexSignal& beta0, const ComplexSignal& epsilon);

/// ||eps||_2 / ||F_Omega beta0||_2.
double relative_noise(const MeasurementOperator& op, const ComplexSignal& beta0, const ComplexSignal& epsilon);

struct OracleRatios {
  double c2 = 0.0;  // ||beta_hat - beta0||_2 sqrt(n) / sqrt(s0 log p)
  double c1 = 0.0;  // ||beta_hat - beta0||_1 sqrt(n) / (s0 sqrt(log p))
};

OracleRatios oracle_error_check(const ComplexSignal& beta_hat, const ComplexSignal& beta0, std::size_t s0,
                                std::size_t n, std::size_t p);

inline constexpr std::size_t kRipSupportCap = 1'000'000;

/// Restricted isometry constant of order s by enumerating every s-column
/// support: max over supports of max(1 - sigma_min^2, sigma_max^2 - 1). The
/// matrix is used as given (normalize by 1/sqrt(n) beforehand).
double rip_bruteforce(const ComplexMatrix& matrix, std::size_t s, std::size_t cap = kRipSupportCap);

/// Shared settings for the Monte Carlo studies below. Each trial draws a fresh
/// pattern and noise from derive_seed(master_seed, trial); sigma is treated as known.
struct StudyConfig {
  GroundTruth truth;
  std::size_t n = 0;
  double sigma = 1.0;
  double lambda_multiple = 25.0;
  double K = 1.0;
  LambdaScale lambda_scale = LambdaScale::kSumOfSquares;
  SamplingMode mode = SamplingMode::kWithReplacement;
  std::uint64_t master_seed = 0;
  SolverOptions solver;
  std::size_t threads = 1;
  /// Skip the LASSO and use beta_hat = 0 (isolates the noise term).
  bool force_zero_estimate = false;
};

struct CoverageReport {
  std::vector<double> per_coordinate;  // fraction of trials with beta0_i in J_i
  double support = 0.0;                // mean of per_coordinate over the support
  double off_support = 0.0;            // mean over the complement
  double overall = 0.0;
  std::size_t trials = 0;
  std::size_t unconverged = 0;
};

CoverageReport empirical_coverage(const StudyConfig& config, std::size_t trials, double alpha);

struct BiasDecayRow {
  std::size_t n = 0;
  double median_r_linf = 0.0;
  std::vector<double> r_linf;  // one entry per seed, in seed order
};

/// ||R||_inf for each n in `n_values` over `seeds` independent realizations.
std::vector<BiasDecayRow> bias_decay_study(const StudyConfig& config, const std::vector<std::size_t>& n_values,
                                           std::size_t seeds);

double median(std::vector<double> values);

}  // namespace csuq
