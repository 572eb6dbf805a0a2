#include "qcs/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

namespace qcs {

namespace {

// Next whitespace-delimited token, skipping '#' comments to end of line.
std::string next_token(std::istream& in, const std::string& path) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw IoError("pgm: unexpected end of file in " + path);
  return tok;
}

int parse_header_int(std::istream& in, const std::string& path, const char* what) {
  const std::string tok = next_token(in, path);
  try {
    size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size() || v < 0) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError("pgm: bad " + std::string(what) + " '" + tok + "' in " + path);
  }
}

}  // namespace

ImagePlane read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("pgm: cannot open " + path);

  const std::string magic = next_token(in, path);
  if (magic != "P2" && magic != "P5") throw IoError("pgm: unsupported magic '" + magic + "' in " + path);
  const int width = parse_header_int(in, path, "width");
  const int height = parse_header_int(in, path, "height");
  const int maxval = parse_header_int(in, path, "maxval");
  if (width < 1 || height < 1 || maxval < 1 || maxval > 65535)
    throw IoError("pgm: bad dimensions or maxval in " + path);

  ImagePlane img;
  img.width = width;
  img.height = height;
  img.pixels.resize(static_cast<size_t>(width) * height);

  if (magic == "P2") {
    for (auto& px : img.pixels) {
      const int v = parse_header_int(in, path, "pixel");
      if (v > maxval) throw IoError("pgm: pixel above maxval in " + path);
      px = static_cast<double>(v) / maxval;
    }
  } else {
    // One whitespace byte separates the header from the raster.
    const int bytes = maxval > 255 ? 2 : 1;
    for (auto& px : img.pixels) {
      int v;
      if (bytes == 1) {
        const int b = in.get();
        if (b == EOF) throw IoError("pgm: truncated raster in " + path);
        v = b;
      } else {
        const int hi = in.get(), lo = in.get();
        if (hi == EOF || lo == EOF) throw IoError("pgm: truncated raster in " + path);
        v = hi * 256 + lo;
      }
      if (v > maxval) throw IoError("pgm: pixel above maxval in " + path);
      px = static_cast<double>(v) / maxval;
    }
  }
  return img;
}

void write_pgm(const std::string& path, const ImagePlane& img, int maxval) {
  if (maxval < 1 || maxval > 255)
    throw std::invalid_argument("write_pgm: maxval must be in [1, 255]");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("pgm: cannot create " + path);
  out << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
  for (const double v : img.pixels) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    out.put(static_cast<char>(static_cast<int>(std::lround(clamped * maxval))));
  }
  if (!out) throw IoError("pgm: write failed for " + path);
}

}  // namespace qcs
