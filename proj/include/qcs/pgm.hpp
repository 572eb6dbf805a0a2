#pragma once

#include <stdexcept>
#include <string>

#include "qcs/signals.hpp"

namespace qcs {

// File-level failures (missing file, truncated or malformed stream). Mapped
// to exit code 3 by the CLI.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads ASCII (P2) or binary (P5) PGM; intensities are scaled to [0, 1] by
// the file's maxval. P5 with maxval > 255 uses big-endian 16-bit samples.
ImagePlane read_pgm(const std::string& path);

// Writes binary P5 with the given maxval; intensities are clamped to [0, 1]
// and rounded.
void write_pgm(const std::string& path, const ImagePlane& img, int maxval = 255);

}  // namespace qcs
