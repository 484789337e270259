#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "csuq/random.hpp"
#include "csuq/types.hpp"

namespace csuq::testing {

inline ComplexSignal random_signal(std::size_t len, Rng& rng) {
  std::normal_distribution<double> g;
  ComplexSignal v(static_cast<Eigen::Index>(len));
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

// O(N^2) DFT with twiddles reduced mod N before the trig call.
inline ComplexSignal naive_dft(const ComplexSignal& x, int sign) {
  const auto n = static_cast<std::size_t>(x.size());
  ComplexSignal out = ComplexSignal::Zero(x.size());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      out[static_cast<Eigen::Index>(k)] += x[static_cast<Eigen::Index>(j)] * std::polar(1.0, angle);
    }
  }
  return out;
}

inline double rel_err(const ComplexSignal& a, const ComplexSignal& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

}  // namespace csuq::testing
