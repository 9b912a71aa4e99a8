#include "vrrt/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace vrrt {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  if (tok.empty()) throw std::runtime_error("truncated PGM header");
  return tok;
}

int header_int(std::istream& in, const char* what) {
  const std::string tok = header_token(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("bad PGM ") + what + ": " + tok);
  }
}

}  // namespace

Image read_pgm(std::istream& in) {
  const std::string magic = header_token(in);
  if (magic != "P2" && magic != "P5") throw std::runtime_error("not a PGM file (magic " + magic + ")");
  const int width = header_int(in, "width");
  const int height = header_int(in, "height");
  const int maxval = header_int(in, "maxval");
  if (width <= 0 || height <= 0) throw std::runtime_error("bad PGM dimensions");
  if (maxval <= 0 || maxval > 255) throw std::runtime_error("unsupported PGM maxval " + std::to_string(maxval));

  Image img(width, height);
  const double scale = maxval;
  if (magic == "P5") {
    // header_token consumed exactly one whitespace byte after maxval.
    std::string raw(img.pixels.size(), '\0');
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) throw std::runtime_error("truncated PGM data");
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const int v = static_cast<unsigned char>(raw[i]);
      if (v > maxval) throw std::runtime_error("PGM sample exceeds maxval");
      img.pixels[i] = v / scale;
    }
  } else {
    for (auto& p : img.pixels) {
      int v = 0;
      if (!(in >> v)) throw std::runtime_error("truncated PGM data");
      if (v < 0 || v > maxval) throw std::runtime_error("PGM sample out of range");
      p = v / scale;
    }
  }
  return img;
}

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_pgm(in);
}

void write_pgm(std::ostream& out, const Image& image, PgmFormat format) {
  out << (format == PgmFormat::Binary ? "P5" : "P2") << "\n" << image.width << " " << image.height << "\n255\n";
  auto quantize = [](double v) {
    return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  };
  if (format == PgmFormat::Binary) {
    std::string raw(image.pixels.size(), '\0');
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<char>(quantize(image.pixels[i]));
    out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
  } else {
    for (int y = 0; y < image.height; ++y) {
      for (int x = 0; x < image.width; ++x) out << (x ? " " : "") << quantize(image.at(x, y));
      out << "\n";
    }
  }
  if (!out) throw std::runtime_error("failed writing PGM");
}

void write_pgm(const std::filesystem::path& path, const Image& image, PgmFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_pgm(out, image, format);
}

}  // namespace vrrt
