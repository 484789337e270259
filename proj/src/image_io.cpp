#include "csuq/image_io.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "csuq/error.hpp"

namespace csuq {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string header_token(std::istream& is) {
  std::string token;
  int c;
  while ((c = is.get()) != EOF) {
    if (c == '#') {
      while ((c = is.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  if (token.empty()) throw IoError("PGM: truncated header");
  return token;
}

std::size_t header_number(std::istream& is, const char* what) {
  const std::string token = header_token(is);
  try {
    std::size_t pos = 0;
    const unsigned long v = std::stoul(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw IoError(fmt::format("PGM: bad {} '{}'", what, token));
  }
}

}  // namespace

Image read_pgm(std::istream& is) {
  const std::string magic = header_token(is);
  if (magic != "P2" && magic != "P5") throw IoError("PGM: unsupported magic '" + magic + "' (need P2 or P5)");
  const std::size_t width = header_number(is, "width");
  const std::size_t height = header_number(is, "height");
  const std::size_t maxval = header_number(is, "maxval");
  if (width == 0 || height == 0) throw IoError("PGM: empty image");
  if (maxval == 0 || maxval > 65535) throw IoError(fmt::format("PGM: maxval {} outside [1, 65535]", maxval));

  Image img(height, width);
  if (magic == "P2") {
    for (auto& px : img.pixels) {
      long v;
      if (!(is >> v)) throw IoError("PGM: truncated pixel data");
      if (v < 0 || static_cast<std::size_t>(v) > maxval) throw IoError(fmt::format("PGM: sample {} exceeds maxval", v));
      px = static_cast<double>(v);
    }
    return img;
  }
  const std::size_t bytes = maxval < 256 ? 1 : 2;
  std::string raw(img.size() * bytes, '\0');
  if (!is.read(raw.data(), static_cast<std::streamsize>(raw.size()))) throw IoError("PGM: truncated pixel data");
  for (std::size_t i = 0; i < img.size(); ++i) {
    const auto hi = static_cast<unsigned char>(raw[i * bytes]);
    img.pixels[i] = bytes == 1 ? hi : static_cast<double>((hi << 8) | static_cast<unsigned char>(raw[i * bytes + 1]));
  }
  return img;
}

Image read_csv_image(std::istream& is) {
  Image img;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t cols = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t pos = 0;
        img.pixels.push_back(std::stod(cell, &pos));
        if (cell.find_first_not_of(" \t", pos) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw IoError(fmt::format("CSV image: bad number '{}' on line {}", cell, line_no));
      }
      ++cols;
    }
    if (img.rows == 0) {
      img.cols = cols;
    } else if (cols != img.cols) {
      throw IoError(fmt::format("CSV image: line {} has {} columns, expected {}", line_no, cols, img.cols));
    }
    ++img.rows;
  }
  if (img.rows == 0) throw IoError("CSV image: no data");
  return img;
}

Image load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input image '" + path.string() + "'");
  try {
    return path.extension() == ".pgm" ? read_pgm(in) : read_csv_image(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_csv_image(std::ostream& os, const Image& image) {
  for (std::size_t r = 0; r < image.rows; ++r) {
    for (std::size_t c = 0; c < image.cols; ++c) {
      if (c) os << ',';
      os << fmt::format("{:.17g}", image(r, c));
    }
    os << '\n';
  }
}

}  // namespace csuq
