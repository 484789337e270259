#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace csuq {

/// Complex FFT of arbitrary length.
///
/// Lengths whose prime factors are all small are handled by a recursive
/// mixed-radix Cooley-Tukey transform. Lengths with a prime factor above
/// `kMaxDirectRadix` go through Bluestein's chirp-z algorithm on a
/// power-of-two convolution. Both directions are unnormalized:
///
///   forward:  X_k = sum_j x_j exp(-2 pi i j k / N)
///   backward: X_k = sum_j x_j exp(+2 pi i j k / N)
///
/// A plan is immutable after construction; scratch space is allocated per call,
/// so one plan may be shared across threads.
class FftPlan {
 public:
  static constexpr std::size_t kMaxDirectRadix = 61;

  explicit FftPlan(std::size_t length);

  std::size_t size() const noexcept { return length_; }
  bool uses_bluestein() const noexcept { return bluestein_ != nullptr; }

  void forward(std::span<std::complex<double>> data) const;
  void backward(std::span<std::complex<double>> data) const;

 private:
  struct Bluestein;

  void mixed_radix(std::span<std::complex<double>> data) const;
  void recurse(const std::complex<double>* in, std::size_t stride, std::complex<double>* out,
               std::size_t n, std::size_t level) const;
  std::complex<double> root(std::size_t exponent, std::size_t n) const;

  std::size_t length_;
  std::vector<std::size_t> factors_;
  std::vector<std::complex<double>> twiddles_;  // exp(-2 pi i k / length_)
  std::shared_ptr<const Bluestein> bluestein_;
};

}  // namespace csuq
