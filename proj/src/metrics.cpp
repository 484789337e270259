#include "csuq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "csuq/error.hpp"
#include "csuq/parallel.hpp"
#include "csuq/random.hpp"

namespace csuq {

namespace {

void check_length(const ComplexSignal& v, std::size_t expected, const char* name) {
  if (static_cast<std::size_t>(v.size()) != expected) {
    throw DimensionError(fmt::format("{} has length {}, expected {}", name, v.size(), expected));
  }
}

}  // namespace

HitRates hit_rates(const ConfidenceRegions& regions, const ComplexSignal& beta0, const IndexSet& support) {
  const std::size_t p = regions.size();
  check_length(beta0, p, "beta0");
  if (support.empty()) throw DomainError("h_S0 is undefined for an empty support");
  HitRates rates;
  for (std::size_t i = 0; i < p; ++i) {
    if (contains(regions, i, beta0[static_cast<Eigen::Index>(i)])) ++rates.hits;
  }
  for (std::size_t i : support) {
    if (i >= p) throw DimensionError(fmt::format("support index {} outside [0, {})", i, p));
    if (contains(regions, i, beta0[static_cast<Eigen::Index>(i)])) ++rates.support_hits;
  }
  rates.h = static_cast<double>(rates.hits) / static_cast<double>(p);
  rates.h_S0 = static_cast<double>(rates.support_hits) / static_cast<double>(support.size());
  return rates;
}

double ssim(const Image& a, const Image& b, double dynamic_range) {
  if (a.rows != b.rows || a.cols != b.cols || a.size() != b.size()) {
    throw DimensionError(fmt::format("SSIM needs equal image shapes ({}x{} vs {}x{})", a.rows, a.cols, b.rows, b.cols));
  }
  if (!(dynamic_range > 0.0)) throw DomainError("SSIM dynamic range must be positive");
  if (a.size() == 0) throw DimensionError("SSIM of an empty image");

  const double c1 = (0.01 * dynamic_range) * (0.01 * dynamic_range);
  const double c2 = (0.03 * dynamic_range) * (0.03 * dynamic_range);
  const std::size_t wr = std::min<std::size_t>(8, a.rows);
  const std::size_t wc = std::min<std::size_t>(8, a.cols);
  const double count = static_cast<double>(wr * wc);

  double total = 0.0;
  std::size_t windows = 0;
  for (std::size_t r0 = 0; r0 + wr <= a.rows; ++r0) {
    for (std::size_t c0 = 0; c0 + wc <= a.cols; ++c0) {
      double mu_a = 0.0, mu_b = 0.0;
      for (std::size_t r = r0; r < r0 + wr; ++r) {
        for (std::size_t c = c0; c < c0 + wc; ++c) {
          mu_a += a(r, c);
          mu_b += b(r, c);
        }
      }
      mu_a /= count;
      mu_b /= count;
      double var_a = 0.0, var_b = 0.0, cov = 0.0;
      for (std::size_t r = r0; r < r0 + wr; ++r) {
        for (std::size_t c = c0; c < c0 + wc; ++c) {
          const double da = a(r, c) - mu_a;
          const double db = b(r, c) - mu_b;
          var_a += da * da;
          var_b += db * db;
          cov += da * db;
        }
      }
      var_a /= count;
      var_b /= count;
      cov /= count;
      total += ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
               ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

DecompositionReport decompose(const SubsampledFourier& op, const ComplexSignal& y, const ComplexSignal& beta_hat,
                              const ComplexSignal& beta_u, const ComplexSignal& beta0, const ComplexSignal& epsilon) {
  const std::size_t p = op.cols();
  const std::size_t n = op.rows();
  if (n == 0) throw DimensionError("decomposition needs n >= 1");
  check_length(y, n, "y");
  check_length(epsilon, n, "epsilon");
  check_length(beta_hat, p, "beta_hat");
  check_length(beta_u, p, "beta_u");
  check_length(beta0, p, "beta0");

  const double root_n = std::sqrt(static_cast<double>(n));
  DecompositionReport report;
  report.W = op.adjoint(epsilon) / root_n;
  const ComplexSignal diff = beta_hat - beta0;
  report.R = -root_n * (apply_sample_covariance(op, diff) - diff);
  const ComplexSignal lhs = root_n * (beta_u - beta0);
  report.residual_linf = (lhs - report.W - report.R).cwiseAbs().maxCoeff();
  report.r_linf = report.R.cwiseAbs().maxCoeff();
  return report;
}

double relative_noise(const MeasurementOperator& op, const ComplexSignal& beta0, const ComplexSignal& epsilon) {
  check_length(epsilon, op.rows(), "epsilon");
  const double denom = op.forward(beta0).norm();
  if (denom == 0.0) throw DomainError("relative noise undefined: F_Omega beta0 is zero");
  return epsilon.norm() / denom;
}

OracleRatios oracle_error_check(const ComplexSignal& beta_hat, const ComplexSignal& beta0, std::size_t s0,
                                std::size_t n, std::size_t p) {
  if (s0 < 1) throw DomainError("oracle check needs s0 >= 1");
  if (p < 2) throw DomainError("oracle check needs p >= 2");
  check_length(beta_hat, static_cast<std::size_t>(beta0.size()), "beta_hat");
  const ComplexSignal diff = beta_hat - beta0;
  const double log_p = std::log(static_cast<double>(p));
  const double root_n = std::sqrt(static_cast<double>(n));
  const double s = static_cast<double>(s0);
  return {diff.norm() * root_n / std::sqrt(s * log_p), diff.cwiseAbs().sum() * root_n / (s * std::sqrt(log_p))};
}

double rip_bruteforce(const ComplexMatrix& matrix, std::size_t s, std::size_t cap) {
  const auto p = static_cast<std::size_t>(matrix.cols());
  if (s == 0) return 0.0;
  if (s > p) throw DomainError(fmt::format("RIP order {} exceeds the number of columns {}", s, p));

  // C(p, s) with early exit once the cap is passed.
  double supports = 1.0;
  for (std::size_t k = 0; k < s; ++k) {
    supports = supports * static_cast<double>(p - k) / static_cast<double>(k + 1);
    if (supports > static_cast<double>(cap)) {
      throw SizeLimitError(fmt::format("C({}, {}) supports exceed the enumeration cap of {}", p, s, cap));
    }
  }

  std::vector<Eigen::Index> cols(s);
  for (std::size_t k = 0; k < s; ++k) cols[k] = static_cast<Eigen::Index>(k);
  ComplexMatrix sub(matrix.rows(), static_cast<Eigen::Index>(s));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig;
  double delta = 0.0;
  while (true) {
    for (std::size_t k = 0; k < s; ++k) sub.col(static_cast<Eigen::Index>(k)) = matrix.col(cols[k]);
    const ComplexMatrix gram = sub.adjoint() * sub;
    eig.compute(gram, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    delta = std::max({delta, 1.0 - ev.minCoeff(), ev.maxCoeff() - 1.0});

    // next combination in lexicographic order
    std::size_t k = s;
    while (k > 0 && cols[k - 1] == static_cast<Eigen::Index>(p - s + k - 1)) --k;
    if (k == 0) break;
    ++cols[k - 1];
    for (std::size_t j = k; j < s; ++j) cols[j] = cols[j - 1] + 1;
  }
  return delta;
}

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

namespace {

struct StudyTrial {
  SimulatedMeasurement sim;
  LassoSolution solution;
  DebiasedEstimate estimate;
};

StudyTrial run_study_trial(const StudyConfig& config, std::size_t n, std::uint64_t trial_seed,
                           const std::shared_ptr<const FftPlan>& plan) {
  const GroundTruth& truth = config.truth;
  SimulatedMeasurement sim = simulate_measurement(truth, n, config.sigma, config.mode, trial_seed, plan);
  LassoSolution sol;
  if (config.force_zero_estimate) {
    sol.beta_hat = ComplexSignal::Zero(static_cast<Eigen::Index>(truth.p()));
    sol.converged = true;
  } else {
    const double lam = lambda_from_multiple(config.lambda_multiple, lambda0(config.sigma, config.K, n, truth.p()), n,
                                            config.lambda_scale);
    sol = solve_classo(sim.op, sim.y, lam, config.solver);
  }
  DebiasedEstimate est = debias(sim.op, sim.y, sol.beta_hat);
  return {std::move(sim), std::move(sol), std::move(est)};
}

}  // namespace

CoverageReport empirical_coverage(const StudyConfig& config, std::size_t trials, double alpha) {
  if (trials < 1) throw DomainError("coverage needs trials >= 1");
  const GroundTruth& truth = config.truth;
  const std::size_t p = truth.p();
  const double radius = confidence_radius(config.sigma, config.n, alpha);
  auto plan = std::make_shared<const FftPlan>(p);

  std::vector<std::vector<unsigned char>> hits(trials);
  std::vector<unsigned char> converged(trials, 0);
  parallel_for(trials, config.threads, [&](std::size_t t) {
    StudyTrial trial = run_study_trial(config, config.n, derive_seed(config.master_seed, t), plan);
    ConfidenceRegions regions = confidence_regions(trial.estimate, config.sigma, config.n, alpha);
    regions.radius = radius;
    set_roundoff_slack(regions);
    hits[t].resize(p);
    for (std::size_t i = 0; i < p; ++i) hits[t][i] = contains(regions, i, truth.beta0[static_cast<Eigen::Index>(i)]);
    converged[t] = trial.solution.converged;
  });

  CoverageReport report;
  report.trials = trials;
  report.per_coordinate.assign(p, 0.0);
  std::vector<std::size_t> counts(p, 0);
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < p; ++i) counts[i] += hits[t][i];
    if (!converged[t]) ++report.unconverged;
  }
  std::vector<unsigned char> on_support(p, 0);
  for (std::size_t i : truth.support) on_support[i] = 1;
  std::size_t support_total = 0, off_total = 0, all_total = 0;
  for (std::size_t i = 0; i < p; ++i) {
    report.per_coordinate[i] = static_cast<double>(counts[i]) / static_cast<double>(trials);
    all_total += counts[i];
    (on_support[i] ? support_total : off_total) += counts[i];
  }
  const double s0 = static_cast<double>(truth.s0());
  const double off = static_cast<double>(p - truth.s0());
  const double denom = static_cast<double>(trials);
  report.support = s0 > 0 ? static_cast<double>(support_total) / (s0 * denom) : std::numeric_limits<double>::quiet_NaN();
  report.off_support = off > 0 ? static_cast<double>(off_total) / (off * denom) : std::numeric_limits<double>::quiet_NaN();
  report.overall = static_cast<double>(all_total) / (static_cast<double>(p) * denom);
  return report;
}

std::vector<BiasDecayRow> bias_decay_study(const StudyConfig& config, const std::vector<std::size_t>& n_values,
                                           std::size_t seeds) {
  if (seeds < 1) throw DomainError("bias decay study needs seeds >= 1");
  auto plan = std::make_shared<const FftPlan>(config.truth.p());
  std::vector<BiasDecayRow> rows;
  for (std::size_t level = 0; level < n_values.size(); ++level) {
    const std::size_t n = n_values[level];
    BiasDecayRow row;
    row.n = n;
    row.r_linf.assign(seeds, 0.0);
    // Seeds are shared across n so that every level sees the same stream family.
    parallel_for(seeds, config.threads, [&](std::size_t s) {
      StudyTrial trial = run_study_trial(config, n, derive_seed(config.master_seed, s), plan);
      row.r_linf[s] = decompose(trial.sim.op, trial.sim.y, trial.solution.beta_hat, trial.estimate.beta_u,
                                config.truth.beta0, trial.sim.noise)
                          .r_linf;
    });
    row.median_r_linf = median(row.r_linf);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace csuq
