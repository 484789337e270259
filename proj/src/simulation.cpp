#include "csuq/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "csuq/error.hpp"
#include "csuq/random.hpp"

namespace csuq {

GroundTruth make_phantom(const PhantomSpec& spec) {
  const std::size_t p = spec.rows * spec.cols;
  if (p == 0) throw DimensionError("phantom needs rows, cols >= 1");
  if (spec.s0 > p) throw DimensionError(fmt::format("phantom sparsity {} exceeds p = {}", spec.s0, p));
  if (!(spec.min_magnitude > 0.0) || spec.max_magnitude < spec.min_magnitude) {
    throw DomainError("phantom magnitudes need 0 < min_magnitude <= max_magnitude");
  }
  GroundTruth truth;
  truth.rows = spec.rows;
  truth.cols = spec.cols;
  truth.beta0 = ComplexSignal::Zero(static_cast<Eigen::Index>(p));

  Rng rng(derive_seed(spec.seed, 0x70a7));
  std::vector<std::size_t> pool(p);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t j = 0; j < spec.s0; ++j) {
    std::uniform_int_distribution<std::size_t> pick(j, p - 1);
    std::swap(pool[j], pool[pick(rng)]);
  }
  truth.support.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(spec.s0));
  std::sort(truth.support.begin(), truth.support.end());

  std::uniform_real_distribution<double> magnitude(spec.min_magnitude, spec.max_magnitude);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (std::size_t idx : truth.support) {
    const double mag = magnitude(rng);
    const double arg = spec.complex_phase ? phase(rng) : 0.0;
    truth.beta0[static_cast<Eigen::Index>(idx)] = std::polar(mag, arg);
  }
  return truth;
}

GroundTruth sparsify_threshold(const Image& image, double threshold) {
  if (!(threshold >= 0.0)) throw DomainError("threshold must be >= 0");
  GroundTruth truth;
  truth.rows = image.rows;
  truth.cols = image.cols;
  truth.beta0 = ComplexSignal::Zero(static_cast<Eigen::Index>(image.size()));
  for (std::size_t i = 0; i < image.size(); ++i) {
    const double v = image.pixels[i];
    if (std::abs(v) < threshold || v == 0.0) continue;
    truth.beta0[static_cast<Eigen::Index>(i)] = {v, 0.0};
    truth.support.push_back(i);
  }
  return truth;
}

ComplexSignal generate_noise(std::size_t n, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw DomainError("noise level sigma must be >= 0");
  ComplexSignal eps = ComplexSignal::Zero(static_cast<Eigen::Index>(n));
  if (sigma == 0.0) return eps;
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma / std::numbers::sqrt2);
  for (Eigen::Index j = 0; j < eps.size(); ++j) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    eps[j] = {re, im};
  }
  return eps;
}

SimulatedMeasurement simulate_measurement(const GroundTruth& truth, std::size_t n, double sigma,
                                          SamplingMode mode, std::uint64_t trial_seed,
                                          std::shared_ptr<const FftPlan> plan) {
  SubsampledFourier op(sample_pattern(truth.p(), n, derive_seed(trial_seed, 0), mode), std::move(plan));
  ComplexSignal noise = generate_noise(n, sigma, derive_seed(trial_seed, 1));
  ComplexSignal y = op.forward(truth.beta0) + noise;
  return {std::move(op), std::move(noise), std::move(y)};
}

}  // namespace csuq
