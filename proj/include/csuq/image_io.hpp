#pragma once

#include <filesystem>
#include <iosfwd>

#include "csuq/types.hpp"

namespace csuq {

/// Grayscale PGM, ASCII (P2) or binary (P5), maxval up to 65535 (16-bit samples are big-endian).
Image read_pgm(std::istream& is);

/// One image row per line, comma-separated numbers. Blank lines are skipped.
Image read_csv_image(std::istream& is);

/// Dispatches on extension: .pgm -> PGM, anything else -> CSV. Errors name the path.
Image load_image(const std::filesystem::path& path);

void write_csv_image(std::ostream& os, const Image& image);

}  // namespace csuq
