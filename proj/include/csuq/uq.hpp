#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "csuq/fourier_ops.hpp"
#include "csuq/lasso.hpp"
#include "csuq/types.hpp"

namespace csuq {

/// beta_u = beta_hat + X^*(y - X beta_hat) / n, i.e. the debiased LASSO with M = I.
struct DebiasedEstimate {
  ComplexSignal beta_u;
  ComplexSignal beta_hat;
  std::uint64_t pattern_ref = 0;  // SamplingPattern::fingerprint() of the design
};

/// Closed disks J_i = { z : |center_i - z| <= radius } with one radius for all coordinates.
struct ConfidenceRegions {
  ComplexSignal center;
  double radius = 0.0;
  double alpha = 0.05;
  double sigma_hat = 0.0;
  std::size_t n = 0;
  /// Added to the radius in `contains`; absorbs round-off when the radius is 0.
  double slack = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(center.size()); }
};

DebiasedEstimate debias(const SubsampledFourier& op, const ComplexSignal& y, const ComplexSignal& beta_hat);

/// lambda_0 = sigma sqrt(K) / sqrt(n) * (2 + sqrt(12 log p)), natural log.
double lambda0(double sigma, double K, std::size_t n, std::size_t p);

/// Which data-fit term a "multiple of lambda_0" is calibrated against.
///  kMeanSquares: lambda weighs the (1 / 2n) ||X beta - y||^2 objective directly.
///  kSumOfSquares: lambda weighs (1 / 2) ||X beta - y||^2, the convention of
///    general-purpose LASSO solvers; the equivalent weight in the (1 / 2n)
///    objective is lambda / n.
enum class LambdaScale { kMeanSquares, kSumOfSquares };

std::string to_string(LambdaScale scale);
LambdaScale parse_lambda_scale(const std::string& text);

/// Regularization weight for the (1 / 2n) objective given a multiple of lambda_0.
double lambda_from_multiple(double multiple, double lambda0, std::size_t n, LambdaScale scale);

/// Residual-based noise level ||y - X beta_hat||_2 / sqrt(n). Needs n >= 2.
double estimate_noise(const MeasurementOperator& op, const ComplexSignal& y, const ComplexSignal& beta_hat);

/// delta(alpha) = sigma_hat sqrt(log(1 / alpha)) / sqrt(n).
double confidence_radius(double sigma_hat, std::size_t n, double alpha);

ConfidenceRegions confidence_regions(const DebiasedEstimate& est, double sigma_hat, std::size_t n, double alpha);

/// Closed-disk membership; throws DimensionError for i out of range.
/// Relative round-off allowance used by the experiment pipelines: slack = kRoundoffSlack * ||center||_inf.
inline constexpr double kRoundoffSlack = 1e-12;

void set_roundoff_slack(ConfidenceRegions& regions);

bool contains(const ConfidenceRegions& regions, std::size_t i, Complex z);

/// CSV with columns coordinate,re_center,im_center,radius.
void write_regions_csv(std::ostream& os, const ConfidenceRegions& regions);

inline const std::vector<double> kDefaultCvMultiples{1, 2, 5, 10, 25, 50, 100};

struct CvOptions {
  std::vector<double> multiples = kDefaultCvMultiples;
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  double K = 1.0;
  LambdaScale lambda_scale = LambdaScale::kMeanSquares;
  std::size_t threads = 1;
  SolverOptions solver;
};

struct CvRow {
  double multiple;
  double lambda;
  std::vector<double> fold_errors;
  double mean_error;
};

struct CvResult {
  double lambda = 0.0;
  double multiple = 0.0;
  double lambda0 = 0.0;
  std::vector<CvRow> table;  // in the order of CvOptions::multiples
};

/// K-fold cross validation over lambda = lambda_from_multiple(multiple, lambda0(sigma_hat, K, n, p)).
/// Rows of the pattern are shuffled with `seed` and dealt into folds; each
/// candidate is fit on the other folds and scored by the mean squared
/// prediction error on the held-out rows. Ties go to the earlier candidate.
CvResult select_lambda_cv(const SubsampledFourier& op, const ComplexSignal& y, double sigma_hat,
                          const CvOptions& opts = {});

}  // namespace csuq
