#include "csuq/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csuq/error.hpp"

namespace csuq {

namespace {

using cplx = std::complex<double>;

std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> factors;
  while (n % 4 == 0) {
    factors.push_back(4);
    n /= 4;
  }
  if (n % 2 == 0) {
    factors.push_back(2);
    n /= 2;
  }
  for (std::size_t f = 3; f * f <= n; f += 2) {
    while (n % f == 0) {
      factors.push_back(f);
      n /= f;
    }
  }
  if (n > 1) factors.push_back(n);
  return factors;
}

// exp(-2 pi i k / n) evaluated directly so every entry carries full precision.
std::vector<cplx> unit_roots(std::size_t n) {
  std::vector<cplx> roots(n);
  const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = step * static_cast<double>(k);
    roots[k] = {std::cos(angle), std::sin(angle)};
  }
  return roots;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

struct FftPlan::Bluestein {
  explicit Bluestein(std::size_t n) : conv(next_pow2(2 * n - 1)), chirp(n), kernel(conv.size(), 0.0) {
    // chirp_k = exp(-pi i k^2 / n); k^2 is reduced mod 2n before scaling.
    const std::size_t period = 2 * n;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t sq = static_cast<std::size_t>((static_cast<unsigned __int128>(k) * k) % period);
      const double angle = -std::numbers::pi * static_cast<double>(sq) / static_cast<double>(n);
      chirp[k] = {std::cos(angle), std::sin(angle)};
    }
    const std::size_t m = conv.size();
    kernel[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) {
      kernel[k] = std::conj(chirp[k]);
      kernel[m - k] = std::conj(chirp[k]);
    }
    conv.forward(kernel);
  }

  void apply(std::span<cplx> data) const {
    const std::size_t n = chirp.size();
    const std::size_t m = conv.size();
    std::vector<cplx> work(m, 0.0);
    for (std::size_t k = 0; k < n; ++k) work[k] = data[k] * chirp[k];
    conv.forward(work);
    for (std::size_t k = 0; k < m; ++k) work[k] *= kernel[k];
    conv.backward(work);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) data[k] = work[k] * chirp[k] * scale;
  }

  FftPlan conv;
  std::vector<cplx> chirp;
  std::vector<cplx> kernel;  // forward transform of the conjugate chirp, wrapped
};

FftPlan::FftPlan(std::size_t length) : length_(length) {
  if (length == 0) throw DimensionError("FFT length must be positive");
  factors_ = factorize(length);
  if (!factors_.empty() && *std::max_element(factors_.begin(), factors_.end()) > kMaxDirectRadix) {
    factors_.clear();
    bluestein_ = std::make_shared<const Bluestein>(length);
  } else {
    twiddles_ = unit_roots(length);
  }
}

cplx FftPlan::root(std::size_t exponent, std::size_t n) const {
  // exp(-2 pi i exponent / n) for n dividing length_.
  return twiddles_[(exponent % n) * (length_ / n)];
}

void FftPlan::recurse(const cplx* in, std::size_t stride, cplx* out, std::size_t n,
                      std::size_t level) const {
  const std::size_t radix = factors_[level];
  const std::size_t m = n / radix;

  if (m == 1) {
    for (std::size_t q = 0; q < radix; ++q) out[q] = in[q * stride];
  } else {
    for (std::size_t t = 0; t < radix; ++t) recurse(in + t * stride, stride * radix, out + t * m, m, level + 1);
  }

  if (radix == 2) {
    for (std::size_t k = 0; k < m; ++k) {
      const cplx a = out[k];
      const cplx b = out[k + m] * root(k, n);
      out[k] = a + b;
      out[k + m] = a - b;
    }
    return;
  }
  if (radix == 4) {
    for (std::size_t k = 0; k < m; ++k) {
      const cplx a0 = out[k];
      const cplx a1 = out[k + m] * root(k, n);
      const cplx a2 = out[k + 2 * m] * root(2 * k, n);
      const cplx a3 = out[k + 3 * m] * root(3 * k, n);
      const cplx s02 = a0 + a2;
      const cplx d02 = a0 - a2;
      const cplx s13 = a1 + a3;
      const cplx d13 = a1 - a3;
      const cplx rot{d13.imag(), -d13.real()};  // -i * d13
      out[k] = s02 + s13;
      out[k + m] = d02 + rot;
      out[k + 2 * m] = s02 - s13;
      out[k + 3 * m] = d02 - rot;
    }
    return;
  }

  std::vector<cplx> scratch(radix);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t t = 0; t < radix; ++t) scratch[t] = out[k + t * m] * root(t * k, n);
    for (std::size_t q = 0; q < radix; ++q) {
      cplx acc = scratch[0];
      for (std::size_t t = 1; t < radix; ++t) acc += scratch[t] * root(t * q, radix);
      out[k + q * m] = acc;
    }
  }
}

void FftPlan::mixed_radix(std::span<cplx> data) const {
  if (length_ == 1) return;
  std::vector<cplx> out(length_);
  recurse(data.data(), 1, out.data(), length_, 0);
  std::copy(out.begin(), out.end(), data.begin());
}

void FftPlan::forward(std::span<cplx> data) const {
  if (data.size() != length_) throw DimensionError("FFT input length does not match plan");
  if (bluestein_) {
    bluestein_->apply(data);
  } else {
    mixed_radix(data);
  }
}

void FftPlan::backward(std::span<cplx> data) const {
  if (data.size() != length_) throw DimensionError("FFT input length does not match plan");
  for (auto& v : data) v = std::conj(v);
  forward(data);
  for (auto& v : data) v = std::conj(v);
}

}  // namespace csuq
