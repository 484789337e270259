#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace csuq {

using Complex = std::complex<double>;

/// Length-p (or length-n in the measurement domain) complex vector.
using ComplexSignal = Eigen::VectorXcd;

using ComplexMatrix = Eigen::MatrixXcd;

using IndexSet = std::vector<std::size_t>;

/// Throws DomainError if any entry is NaN or infinite.
void require_finite(const ComplexSignal& v, const char* what);

/// Real grayscale image stored row-major.
struct Image {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> pixels;

  Image() = default;
  Image(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), pixels(r * c, fill) {}

  std::size_t size() const { return pixels.size(); }
  double& operator()(std::size_t r, std::size_t c) { return pixels[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return pixels[r * cols + c]; }
};

/// Magnitude image of a row-major complex signal.
Image magnitude_image(const ComplexSignal& v, std::size_t rows, std::size_t cols);

}  // namespace csuq
