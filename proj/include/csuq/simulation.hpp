#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>

#include "csuq/fourier_ops.hpp"
#include "csuq/types.hpp"

namespace csuq {

/// Sparse ground truth laid out as a rows x cols image (row-major).
struct GroundTruth {
  ComplexSignal beta0;
  IndexSet support;  // ascending nonzero coordinates
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t p() const { return static_cast<std::size_t>(beta0.size()); }
  std::size_t s0() const { return support.size(); }
};

/// Random complex spikes: s0 distinct positions, magnitudes uniform in
/// [min_magnitude, max_magnitude], phases uniform (or zero when `complex_phase` is off).
struct PhantomSpec {
  std::size_t rows = 32;
  std::size_t cols = 64;
  std::size_t s0 = 10;
  double min_magnitude = 100.0;
  double max_magnitude = 250.0;
  bool complex_phase = true;
  std::uint64_t seed = 0;
};

GroundTruth make_phantom(const PhantomSpec& spec);

/// Row-major flattening with zero imaginary part; |pixel| < threshold becomes 0.
GroundTruth sparsify_threshold(const Image& image, double threshold);

/// Circularly symmetric complex Gaussian: real and imaginary parts independent
/// N(0, sigma^2 / 2), so E|eps_i|^2 = sigma^2.
ComplexSignal generate_noise(std::size_t n, double sigma, std::uint64_t seed);

/// One realization of y = F_Omega beta0 + eps with a fresh pattern and noise.
struct SimulatedMeasurement {
  SubsampledFourier op;
  ComplexSignal noise;
  ComplexSignal y;
};

/// Pattern and noise streams are derived from `trial_seed`, so a trial is
/// reproducible on its own.
SimulatedMeasurement simulate_measurement(const GroundTruth& truth, std::size_t n, double sigma,
                                          SamplingMode mode, std::uint64_t trial_seed,
                                          std::shared_ptr<const FftPlan> plan = nullptr);

}  // namespace csuq
