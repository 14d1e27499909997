#pragma once

#include <string>

#include "mrt/image.hpp"

namespace mrt {

/// 16-bit binary PGM (P5, maxval 65535). Pixels are min-max normalized; the
/// original range is kept in a "# mrt min=.. max=.." comment line.
void write_pgm16(const std::string& path, const ImageGrid& img);

/// Reads a PGM written by write_pgm16 and maps it back through the recorded
/// range (quantized to 16 bits).
ImageGrid read_pgm16(const std::string& path);

/// Raw little-endian f64 pixels, row-major, plus a text sidecar
/// "<path>.hdr" holding width, height and extent.
void write_raw(const std::string& path, const ImageGrid& img);
ImageGrid read_raw(const std::string& path);

}  // namespace mrt
