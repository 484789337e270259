#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "csuq/fft.hpp"
#include "csuq/types.hpp"

namespace csuq {

enum class SamplingMode { kWithReplacement, kDistinct };

std::string to_string(SamplingMode mode);
SamplingMode parse_sampling_mode(const std::string& text);

/// Multiset of n row indices drawn from {0, ..., p-1}; selects the rows of the
/// p x p DFT matrix F with F(l, k) = exp(2 pi i l k / p).
struct SamplingPattern {
  std::size_t p = 0;
  std::vector<std::size_t> indices;
  std::optional<std::uint64_t> seed;
  SamplingMode mode = SamplingMode::kWithReplacement;

  std::size_t n() const { return indices.size(); }

  /// FNV-1a digest of (p, indices); identifies the pattern in derived results.
  std::uint64_t fingerprint() const;

  friend bool operator==(const SamplingPattern&, const SamplingPattern&) = default;
};

/// Draws n row indices uniformly from [0, p). With replacement by default;
/// `kDistinct` draws without replacement and requires n <= p.
SamplingPattern sample_pattern(std::size_t p, std::size_t n, std::uint64_t seed,
                               SamplingMode mode = SamplingMode::kWithReplacement);

/// Checks p >= 1 and every index < p.
void validate(const SamplingPattern& pattern);

void write_pattern_json(std::ostream& os, const SamplingPattern& pattern);
SamplingPattern read_pattern_json(std::istream& is);

/// Linear map C^p -> C^n with an adjoint. The LASSO solver is written against
/// this interface so that the FFT operator and the dense test oracle are
/// interchangeable.
class MeasurementOperator {
 public:
  virtual ~MeasurementOperator() = default;

  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  virtual ComplexSignal forward(const ComplexSignal& beta) const = 0;
  virtual ComplexSignal adjoint(const ComplexSignal& y) const = 0;
};

/// F_Omega applied through a length-p FFT followed by row gathering.
/// Unnormalized: no 1/n or 1/sqrt(n) factors are applied here.
class SubsampledFourier final : public MeasurementOperator {
 public:
  explicit SubsampledFourier(SamplingPattern pattern);
  SubsampledFourier(SamplingPattern pattern, std::shared_ptr<const FftPlan> plan);

  std::size_t rows() const override { return pattern_.n(); }
  std::size_t cols() const override { return pattern_.p; }
  ComplexSignal forward(const ComplexSignal& beta) const override;
  ComplexSignal adjoint(const ComplexSignal& y) const override;

  const SamplingPattern& pattern() const { return pattern_; }
  const std::shared_ptr<const FftPlan>& plan() const { return plan_; }

 private:
  SamplingPattern pattern_;
  std::shared_ptr<const FftPlan> plan_;
};

/// Explicit matrix wrapped as an operator (tests, brute-force checks).
class DenseOperator final : public MeasurementOperator {
 public:
  explicit DenseOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {}

  std::size_t rows() const override { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t cols() const override { return static_cast<std::size_t>(matrix_.cols()); }
  ComplexSignal forward(const ComplexSignal& beta) const override;
  ComplexSignal adjoint(const ComplexSignal& y) const override;

  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

ComplexSignal forward(const SamplingPattern& pattern, const ComplexSignal& beta);
ComplexSignal adjoint(const SamplingPattern& pattern, const ComplexSignal& y);

inline constexpr std::size_t kDenseEntryCap = std::size_t{1} << 22;

/// Entry (j, k) = exp(2 pi i idx_j k / p). Refuses when n * p exceeds `cap`.
ComplexMatrix dense_matrix(const SamplingPattern& pattern, std::size_t cap = kDenseEntryCap);

/// Sigma_hat v = X^* X v / n.
ComplexSignal apply_sample_covariance(const MeasurementOperator& op, const ComplexSignal& v);

}  // namespace csuq
