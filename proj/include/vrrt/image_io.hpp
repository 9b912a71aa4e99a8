#pragma once

#include <filesystem>
#include <iosfwd>

#include "vrrt/renderer.hpp"

namespace vrrt {

enum class PgmFormat { Ascii /* P2 */, Binary /* P5 */ };

/// Reads P2 or P5 graymaps; intensities are mapped linearly to [0, 1].
Image read_pgm(std::istream& in);
Image read_pgm(const std::filesystem::path& path);

/// Writes with maxval 255. Intensities are clamped to [0, 1] and rounded.
void write_pgm(std::ostream& out, const Image& image, PgmFormat format = PgmFormat::Binary);
void write_pgm(const std::filesystem::path& path, const Image& image, PgmFormat format = PgmFormat::Binary);

}  // namespace vrrt
