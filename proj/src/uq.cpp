#include "csuq/uq.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <limits>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "csuq/error.hpp"
#include "csuq/parallel.hpp"
#include "csuq/random.hpp"

namespace csuq {

DebiasedEstimate debias(const SubsampledFourier& op, const ComplexSignal& y, const ComplexSignal& beta_hat) {
  if (op.rows() == 0) throw DimensionError("debias needs n >= 1");
  DebiasedEstimate est;
  est.beta_hat = beta_hat;
  est.beta_u = beta_hat + op.adjoint(y - op.forward(beta_hat)) / static_cast<double>(op.rows());
  est.pattern_ref = op.pattern().fingerprint();
  return est;
}

double lambda0(double sigma, double K, std::size_t n, std::size_t p) {
  if (p < 2) throw DomainError("lambda0 needs p >= 2 so that log p > 0");
  if (n == 0) throw DimensionError("lambda0 needs n >= 1");
  if (!(sigma >= 0.0)) throw DomainError("lambda0 needs sigma >= 0");
  if (!(K >= 1.0)) throw DomainError("lambda0 needs K >= 1");
  const double log_p = std::log(static_cast<double>(p));
  return sigma * std::sqrt(K) / std::sqrt(static_cast<double>(n)) * (2.0 + std::sqrt(12.0 * log_p));
}

std::string to_string(LambdaScale scale) {
  return scale == LambdaScale::kSumOfSquares ? "sum" : "mean";
}

LambdaScale parse_lambda_scale(const std::string& text) {
  if (text == "sum") return LambdaScale::kSumOfSquares;
  if (text == "mean") return LambdaScale::kMeanSquares;
  throw DomainError("unknown lambda scale '" + text + "' (expected sum or mean)");
}

double lambda_from_multiple(double multiple, double lambda0, std::size_t n, LambdaScale scale) {
  if (!(multiple >= 0.0)) throw DomainError("lambda multiple must be >= 0");
  if (n == 0) throw DimensionError("lambda needs n >= 1");
  const double lambda = multiple * lambda0;
  return scale == LambdaScale::kSumOfSquares ? lambda / static_cast<double>(n) : lambda;
}

double estimate_noise(const MeasurementOperator& op, const ComplexSignal& y, const ComplexSignal& beta_hat) {
  if (op.rows() < 2) throw DimensionError("noise estimate needs n >= 2");
  if (static_cast<std::size_t>(y.size()) != op.rows()) throw DimensionError("noise estimate: y has wrong length");
  return (y - op.forward(beta_hat)).norm() / std::sqrt(static_cast<double>(op.rows()));
}

double confidence_radius(double sigma_hat, std::size_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError(fmt::format("alpha must lie in (0, 1), got {}", alpha));
  if (!(sigma_hat >= 0.0)) throw DomainError("sigma_hat must be >= 0");
  if (n == 0) throw DimensionError("confidence radius needs n >= 1");
  return sigma_hat / std::sqrt(static_cast<double>(n)) * std::sqrt(std::log(1.0 / alpha));
}

ConfidenceRegions confidence_regions(const DebiasedEstimate& est, double sigma_hat, std::size_t n, double alpha) {
  ConfidenceRegions regions;
  regions.radius = confidence_radius(sigma_hat, n, alpha);
  regions.center = est.beta_u;
  regions.alpha = alpha;
  regions.sigma_hat = sigma_hat;
  regions.n = n;
  return regions;
}

void set_roundoff_slack(ConfidenceRegions& regions) {
  regions.slack = regions.size() == 0 ? 0.0 : kRoundoffSlack * regions.center.cwiseAbs().maxCoeff();
}

bool contains(const ConfidenceRegions& regions, std::size_t i, Complex z) {
  if (i >= regions.size()) {
    throw DimensionError(fmt::format("coordinate {} outside [0, {})", i, regions.size()));
  }
  return std::abs(regions.center[static_cast<Eigen::Index>(i)] - z) <= regions.radius + regions.slack;
}

void write_regions_csv(std::ostream& os, const ConfidenceRegions& regions) {
  os << "coordinate,re_center,im_center,radius\n";
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const Complex c = regions.center[static_cast<Eigen::Index>(i)];
    os << fmt::format("{},{:.17g},{:.17g},{:.17g}\n", i, c.real(), c.imag(), regions.radius);
  }
}

CvResult select_lambda_cv(const SubsampledFourier& op, const ComplexSignal& y, double sigma_hat,
                          const CvOptions& opts) {
  const auto& pattern = op.pattern();
  const std::size_t n = pattern.n();
  if (opts.multiples.empty()) throw DomainError("cross validation needs at least one lambda multiple");
  for (double m : opts.multiples) {
    if (!(m > 0.0)) throw DomainError("lambda multiples must be positive");
  }
  if (opts.folds < 2) throw DomainError("cross validation needs folds >= 2");
  if (n < opts.folds) throw DimensionError(fmt::format("cross validation needs n >= folds ({} < {})", n, opts.folds));
  if (static_cast<std::size_t>(y.size()) != n) throw DimensionError("cross validation: y has wrong length");

  CvResult result;
  result.lambda0 = lambda0(sigma_hat, opts.K, n, pattern.p);
  result.table.reserve(opts.multiples.size());
  for (double m : opts.multiples) {
    result.table.push_back({m, lambda_from_multiple(m, result.lambda0, n, opts.lambda_scale), std::vector<double>(opts.folds, 0.0), 0.0});
  }
  if (opts.multiples.size() == 1) {
    result.multiple = opts.multiples.front();
    result.lambda = result.table.front().lambda;
    result.table.front().fold_errors.clear();
    result.table.front().mean_error = std::numeric_limits<double>::quiet_NaN();
    return result;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(opts.seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> fold_of(n);
  for (std::size_t j = 0; j < n; ++j) fold_of[order[j]] = j % opts.folds;

  // Within a fold, candidates run from the largest lambda down, each warm-started
  // from the previous solution.
  std::vector<std::size_t> by_lambda(opts.multiples.size());
  std::iota(by_lambda.begin(), by_lambda.end(), std::size_t{0});
  std::stable_sort(by_lambda.begin(), by_lambda.end(),
                   [&](std::size_t a, std::size_t b) { return opts.multiples[a] > opts.multiples[b]; });

  parallel_for(opts.folds, opts.threads, [&](std::size_t fold) {
    SamplingPattern train{pattern.p, {}, std::nullopt, pattern.mode};
    SamplingPattern hold{pattern.p, {}, std::nullopt, pattern.mode};
    std::vector<Eigen::Index> train_rows;
    std::vector<Eigen::Index> hold_rows;
    for (std::size_t j = 0; j < n; ++j) {
      if (fold_of[j] == fold) {
        hold.indices.push_back(pattern.indices[j]);
        hold_rows.push_back(static_cast<Eigen::Index>(j));
      } else {
        train.indices.push_back(pattern.indices[j]);
        train_rows.push_back(static_cast<Eigen::Index>(j));
      }
    }
    const SubsampledFourier train_op(std::move(train), op.plan());
    const SubsampledFourier hold_op(std::move(hold), op.plan());
    ComplexSignal y_train(static_cast<Eigen::Index>(train_rows.size()));
    for (std::size_t j = 0; j < train_rows.size(); ++j) y_train[static_cast<Eigen::Index>(j)] = y[train_rows[j]];
    ComplexSignal y_hold(static_cast<Eigen::Index>(hold_rows.size()));
    for (std::size_t j = 0; j < hold_rows.size(); ++j) y_hold[static_cast<Eigen::Index>(j)] = y[hold_rows[j]];

    std::optional<ComplexSignal> warm;
    for (std::size_t c : by_lambda) {
      double score = std::numeric_limits<double>::quiet_NaN();
      try {
        LassoSolution sol = solve_classo(train_op, y_train, result.table[c].lambda, opts.solver, warm);
        score = (hold_op.forward(sol.beta_hat) - y_hold).squaredNorm() / static_cast<double>(hold_rows.size());
        warm = std::move(sol.beta_hat);
      } catch (const NumericalError&) {
        warm.reset();
      }
      result.table[c].fold_errors[fold] = score;
    }
  });

  double best = std::numeric_limits<double>::infinity();
  for (auto& row : result.table) {
    row.mean_error = std::accumulate(row.fold_errors.begin(), row.fold_errors.end(), 0.0) /
                     static_cast<double>(row.fold_errors.size());
    if (std::isfinite(row.mean_error) && row.mean_error < best) {
      best = row.mean_error;
      result.multiple = row.multiple;
      result.lambda = row.lambda;
    }
  }
  if (!std::isfinite(best)) throw SelectionError("every lambda candidate produced a non-finite CV score");
  return result;
}

}  // namespace csuq
