#include "csuq/fourier_ops.hpp"

#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "csuq/error.hpp"
#include "csuq/random.hpp"

namespace csuq {

std::string to_string(SamplingMode mode) {
  return mode == SamplingMode::kDistinct ? "distinct" : "replacement";
}

SamplingMode parse_sampling_mode(const std::string& text) {
  if (text == "replacement") return SamplingMode::kWithReplacement;
  if (text == "distinct") return SamplingMode::kDistinct;
  throw DomainError("unknown sampling mode '" + text + "' (expected replacement or distinct)");
}

std::uint64_t SamplingPattern::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  feed(p);
  for (auto idx : indices) feed(idx);
  return h;
}

SamplingPattern sample_pattern(std::size_t p, std::size_t n, std::uint64_t seed, SamplingMode mode) {
  if (p == 0) throw DimensionError("sampling pattern needs p >= 1");
  SamplingPattern pattern{p, {}, seed, mode};
  pattern.indices.reserve(n);
  Rng rng(seed);
  if (mode == SamplingMode::kWithReplacement) {
    std::uniform_int_distribution<std::size_t> draw(0, p - 1);
    for (std::size_t j = 0; j < n; ++j) pattern.indices.push_back(draw(rng));
    return pattern;
  }
  if (n > p) {
    throw DimensionError("distinct sampling needs n <= p (n=" + std::to_string(n) + ", p=" + std::to_string(p) + ")");
  }
  // Partial Fisher-Yates: the first n slots become a uniform n-subset in random order.
  std::vector<std::size_t> pool(p);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t j = 0; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> draw(j, p - 1);
    std::swap(pool[j], pool[draw(rng)]);
    pattern.indices.push_back(pool[j]);
  }
  return pattern;
}

void validate(const SamplingPattern& pattern) {
  if (pattern.p == 0) throw DimensionError("sampling pattern needs p >= 1");
  for (std::size_t j = 0; j < pattern.indices.size(); ++j) {
    if (pattern.indices[j] >= pattern.p) {
      throw DimensionError("sampling index " + std::to_string(pattern.indices[j]) + " at position " +
                           std::to_string(j) + " is outside [0, " + std::to_string(pattern.p) + ")");
    }
  }
}

void write_pattern_json(std::ostream& os, const SamplingPattern& pattern) {
  nlohmann::ordered_json j;
  j["p"] = pattern.p;
  j["n"] = pattern.n();
  j["seed"] = pattern.seed ? nlohmann::ordered_json(*pattern.seed) : nlohmann::ordered_json(nullptr);
  j["mode"] = to_string(pattern.mode);
  j["indices"] = pattern.indices;
  os << j.dump() << '\n';
}

SamplingPattern read_pattern_json(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed sampling pattern record: ") + e.what());
  }
  SamplingPattern pattern;
  try {
    pattern.p = j.at("p").get<std::size_t>();
    pattern.indices = j.at("indices").get<std::vector<std::size_t>>();
    if (j.contains("seed") && !j["seed"].is_null()) pattern.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("mode")) pattern.mode = parse_sampling_mode(j["mode"].get<std::string>());
    if (j.contains("n") && j["n"].get<std::size_t>() != pattern.indices.size()) {
      throw DimensionError("sampling pattern record: n does not match the number of indices");
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed sampling pattern record: ") + e.what());
  }
  validate(pattern);
  return pattern;
}

SubsampledFourier::SubsampledFourier(SamplingPattern pattern)
    : SubsampledFourier(std::move(pattern), nullptr) {}

SubsampledFourier::SubsampledFourier(SamplingPattern pattern, std::shared_ptr<const FftPlan> plan)
    : pattern_(std::move(pattern)), plan_(std::move(plan)) {
  validate(pattern_);
  if (!plan_) plan_ = std::make_shared<const FftPlan>(pattern_.p);
  if (plan_->size() != pattern_.p) throw DimensionError("FFT plan length does not match pattern p");
}

ComplexSignal SubsampledFourier::forward(const ComplexSignal& beta) const {
  if (static_cast<std::size_t>(beta.size()) != pattern_.p) {
    throw DimensionError("forward: signal length " + std::to_string(beta.size()) + " != p = " +
                         std::to_string(pattern_.p));
  }
  ComplexSignal spectrum = beta;
  plan_->backward({spectrum.data(), pattern_.p});
  ComplexSignal out(static_cast<Eigen::Index>(pattern_.n()));
  for (std::size_t j = 0; j < pattern_.n(); ++j) {
    out[static_cast<Eigen::Index>(j)] = spectrum[static_cast<Eigen::Index>(pattern_.indices[j])];
  }
  return out;
}

ComplexSignal SubsampledFourier::adjoint(const ComplexSignal& y) const {
  if (static_cast<std::size_t>(y.size()) != pattern_.n()) {
    throw DimensionError("adjoint: measurement length " + std::to_string(y.size()) + " != n = " +
                         std::to_string(pattern_.n()));
  }
  ComplexSignal scattered = ComplexSignal::Zero(static_cast<Eigen::Index>(pattern_.p));
  for (std::size_t j = 0; j < pattern_.n(); ++j) {
    scattered[static_cast<Eigen::Index>(pattern_.indices[j])] += y[static_cast<Eigen::Index>(j)];
  }
  plan_->forward({scattered.data(), pattern_.p});
  return scattered;
}

ComplexSignal DenseOperator::forward(const ComplexSignal& beta) const {
  if (beta.size() != matrix_.cols()) throw DimensionError("dense forward: length mismatch");
  return matrix_ * beta;
}

ComplexSignal DenseOperator::adjoint(const ComplexSignal& y) const {
  if (y.size() != matrix_.rows()) throw DimensionError("dense adjoint: length mismatch");
  return matrix_.adjoint() * y;
}

ComplexSignal forward(const SamplingPattern& pattern, const ComplexSignal& beta) {
  return SubsampledFourier(pattern).forward(beta);
}

ComplexSignal adjoint(const SamplingPattern& pattern, const ComplexSignal& y) {
  return SubsampledFourier(pattern).adjoint(y);
}

ComplexMatrix dense_matrix(const SamplingPattern& pattern, std::size_t cap) {
  validate(pattern);
  const std::size_t n = pattern.n();
  const std::size_t p = pattern.p;
  if (n != 0 && p > cap / n) {
    throw SizeLimitError("dense matrix of " + std::to_string(n) + "x" + std::to_string(p) +
                         " entries exceeds the cap of " + std::to_string(cap));
  }
  // exp(2 pi i m / p) for m in [0, p); the exponent idx*k is reduced mod p exactly.
  std::vector<Complex> roots(p);
  for (std::size_t m = 0; m < p; ++m) {
    roots[m] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(p));
  }
  ComplexMatrix mat(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < p; ++k) {
      mat(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = roots[(pattern.indices[j] * k) % p];
    }
  }
  return mat;
}

ComplexSignal apply_sample_covariance(const MeasurementOperator& op, const ComplexSignal& v) {
  if (op.rows() == 0) throw DimensionError("sample covariance undefined for n = 0");
  return op.adjoint(op.forward(v)) / static_cast<double>(op.rows());
}

}  // namespace csuq
