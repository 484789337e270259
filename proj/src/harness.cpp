#include "csuq/harness.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "csuq/error.hpp"
#include "csuq/metrics.hpp"
#include "csuq/parallel.hpp"
#include "csuq/random.hpp"

namespace csuq {

std::size_t ExperimentConfig::measurements(std::size_t p) const {
  const auto n = static_cast<std::size_t>(std::llround(n_fraction * static_cast<double>(p)));
  if (n < 1) throw DimensionError(fmt::format("n = round({} * {}) must be >= 1", n_fraction, p));
  return n;
}

void ExperimentConfig::validate() const {
  if (!(n_fraction > 0.0 && n_fraction <= 1.0)) throw DomainError("n_fraction must lie in (0, 1]");
  if (!(sigma >= 0.0)) throw DomainError("sigma must be >= 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (!(threshold >= 0.0)) throw DomainError("threshold must be >= 0");
  if (lambda_multiple && !(*lambda_multiple >= 0.0)) throw DomainError("lambda multiple must be >= 0");
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (!(K >= 1.0)) throw DomainError("K must be >= 1");
  solver.validate();
}

namespace {

MetricSummary summarize(const std::vector<TrialMetrics>& trials, double TrialMetrics::*field) {
  MetricSummary s;
  std::size_t count = 0;
  double sum = 0.0;
  for (const auto& t : trials) {
    if (t.failed) continue;
    sum += t.*field;
    ++count;
  }
  if (count == 0) return {std::nan(""), std::nan("")};
  s.mean = sum / static_cast<double>(count);
  if (count > 1) {
    double sq = 0.0;
    for (const auto& t : trials) {
      if (t.failed) continue;
      sq += (t.*field - s.mean) * (t.*field - s.mean);
    }
    s.stddev = std::sqrt(sq / static_cast<double>(count - 1));
  }
  return s;
}

struct TrialOutput {
  TrialMetrics metrics;
  ComplexSignal beta_u;
  ComplexSignal beta_hat;
  ConfidenceRegions regions;
};

TrialOutput run_trial(const ExperimentConfig& config, const GroundTruth& truth, std::size_t n,
                      std::uint64_t trial_seed, const std::shared_ptr<const FftPlan>& plan) {
  const std::size_t p = truth.p();
  SimulatedMeasurement sim = simulate_measurement(truth, n, config.sigma, config.sampling_mode, trial_seed, plan);
  const SubsampledFourier& op = sim.op;

  CvOptions cv;
  cv.multiples = config.cv_multiples;
  cv.folds = config.cv_folds;
  cv.seed = derive_seed(trial_seed, 2);
  cv.K = config.K;
  cv.lambda_scale = config.lambda_scale;
  cv.solver = config.solver;

  auto choose_lambda = [&](double sigma_for_lambda) {
    if (config.lambda_multiple) {
      return lambda_from_multiple(*config.lambda_multiple, lambda0(sigma_for_lambda, config.K, n, p), n,
                                  config.lambda_scale);
    }
    return select_lambda_cv(op, sim.y, sigma_for_lambda, cv).lambda;
  };

  double sigma_used = config.sigma;
  std::optional<ComplexSignal> warm;
  if (!config.sigma_known) {
    // Pilot: sigma from the raw data (an overestimate), one solve, then the residual estimate.
    const ComplexSignal zero = ComplexSignal::Zero(static_cast<Eigen::Index>(p));
    const double pilot_sigma = estimate_noise(op, sim.y, zero);
    LassoSolution pilot = solve_classo(op, sim.y, choose_lambda(pilot_sigma), config.solver);
    sigma_used = estimate_noise(op, sim.y, pilot.beta_hat);
    warm = std::move(pilot.beta_hat);
  }

  const double lambda = choose_lambda(sigma_used);
  LassoSolution sol = solve_classo(op, sim.y, lambda, config.solver, warm);
  DebiasedEstimate est = debias(op, sim.y, sol.beta_hat);
  ConfidenceRegions regions = confidence_regions(est, sigma_used, n, config.alpha);
  set_roundoff_slack(regions);

  TrialOutput out;
  TrialMetrics& m = out.metrics;
  const HitRates rates = hit_rates(regions, truth.beta0, truth.support);
  m.h = rates.h;
  m.h_S0 = rates.h_S0;
  const Image truth_img = magnitude_image(truth.beta0, truth.rows, truth.cols);
  const Image recon_img = magnitude_image(sol.beta_hat, truth.rows, truth.cols);
  m.ssim = ssim(truth_img, recon_img, truth.beta0.cwiseAbs().maxCoeff());
  m.r_linf = decompose(op, sim.y, sol.beta_hat, est.beta_u, truth.beta0, sim.noise).r_linf;
  m.relative_noise = relative_noise(op, truth.beta0, sim.noise);
  m.lambda_used = lambda;
  m.sigma_hat = sigma_used;
  m.radius = regions.radius;
  m.iterations = sol.iterations;
  m.converged = sol.converged;
  out.beta_u = std::move(est.beta_u);
  out.beta_hat = std::move(sol.beta_hat);
  out.regions = std::move(regions);
  return out;
}

}  // namespace

ExperimentAggregate aggregate(const std::vector<TrialMetrics>& trials) {
  ExperimentAggregate agg;
  agg.h = summarize(trials, &TrialMetrics::h);
  agg.h_S0 = summarize(trials, &TrialMetrics::h_S0);
  agg.ssim = summarize(trials, &TrialMetrics::ssim);
  agg.r_linf = summarize(trials, &TrialMetrics::r_linf);
  agg.relative_noise = summarize(trials, &TrialMetrics::relative_noise);
  agg.lambda_used = summarize(trials, &TrialMetrics::lambda_used);
  agg.sigma_hat = summarize(trials, &TrialMetrics::sigma_hat);
  for (const auto& t : trials) {
    if (t.failed) {
      ++agg.failed;
    } else {
      ++agg.successful;
      if (!t.converged) ++agg.unconverged;
    }
  }
  return agg;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const GroundTruth& truth) {
  config.validate();
  const std::size_t p = truth.p();
  if (p < 2) throw DimensionError("experiment needs p >= 2");
  if (truth.rows * truth.cols != p) throw DimensionError("ground truth image shape does not match p");
  if (truth.s0() < 1) throw DomainError("experiment needs a ground truth with s0 >= 1");

  ExperimentResult result;
  result.config_echo = config;
  result.p = p;
  result.n = config.measurements(p);
  result.s0 = truth.s0();
  auto plan = std::make_shared<const FftPlan>(p);

  std::vector<TrialOutput> outputs(config.trials);
  parallel_for(config.trials, config.threads, [&](std::size_t t) {
    try {
      outputs[t] = run_trial(config, truth, result.n, derive_seed(config.master_seed, t), plan);
    } catch (const Error& e) {
      outputs[t].metrics.failed = true;
      outputs[t].metrics.error = e.what();
    }
  });

  result.per_trial.reserve(config.trials);
  for (auto& out : outputs) {
    result.per_trial.push_back(out.metrics);
    if (!out.metrics.failed) {
      result.reconstruction = std::move(out.beta_u);
      result.beta_hat = std::move(out.beta_hat);
      result.regions = std::move(out.regions);
    }
  }
  result.aggregate = aggregate(result.per_trial);
  result.valid = 20 * result.aggregate.successful >= 19 * config.trials;
  return result;
}

std::vector<TableRow> run_table(const std::vector<ExperimentConfig>& configs, const GroundTruthSource& source) {
  std::vector<TableRow> rows;
  std::optional<std::size_t> shared_p;
  for (std::size_t row = 0; row < configs.size(); ++row) {
    const ExperimentConfig& config = configs[row];
    const GroundTruth truth = source(config, row);
    if (shared_p && *shared_p != truth.p()) {
      throw DimensionError(fmt::format("table configs must share p ({} vs {})", *shared_p, truth.p()));
    }
    shared_p = truth.p();
    const ExperimentResult result = run_experiment(config, truth);
    rows.push_back({config.threshold, truth.s0(), result.aggregate.h_S0.mean, result.aggregate.h.mean,
                    result.aggregate.ssim.mean, result.valid});
  }
  return rows;
}

void write_table_csv(std::ostream& os, const std::vector<TableRow>& rows) {
  os << "threshold,s0,h_S0,h,ssim\n";
  for (const auto& row : rows) {
    os << fmt::format("{:.17g},{},{:.17g},{:.17g},{:.17g}\n", row.threshold, row.s0, row.h_S0, row.h, row.ssim);
  }
}

}  // namespace csuq
