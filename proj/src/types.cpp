#include "csuq/types.hpp"

#include <cmath>
#include <string>

#include "csuq/error.hpp"

namespace csuq {

void require_finite(const ComplexSignal& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) {
      throw DomainError(std::string(what) + " has a non-finite entry at index " + std::to_string(i));
    }
  }
}

Image magnitude_image(const ComplexSignal& v, std::size_t rows, std::size_t cols) {
  if (rows * cols != static_cast<std::size_t>(v.size())) {
    throw DimensionError("image shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " does not match signal length " + std::to_string(v.size()));
  }
  Image img(rows, cols);
  for (std::size_t i = 0; i < img.size(); ++i) img.pixels[i] = std::abs(v[static_cast<Eigen::Index>(i)]);
  return img;
}

}  // namespace csuq
