#include "mrt/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "mrt/errors.hpp"
#include "mrt/sinogram_io.hpp"

namespace mrt {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

// Next whitespace-delimited header token, skipping comment lines; comments
// are collected into `comments`.
std::string pgm_token(std::istream& in, std::string& comments) {
  std::string tok;
  for (;;) {
    const int c = in.peek();
    if (c == EOF) throw ParseError("PGM: truncated header");
    if (std::isspace(c)) {
      in.get();
      if (!tok.empty()) return tok;
    } else if (c == '#' && tok.empty()) {
      std::string line;
      std::getline(in, line);
      comments += line + "\n";
    } else {
      tok.push_back(static_cast<char>(in.get()));
    }
  }
}

}  // namespace

void write_pgm16(const std::string& path, const ImageGrid& img) {
  double lo = 0.0, hi = 0.0;
  if (!img.pixels().empty()) {
    lo = hi = img.pixels().front();
    for (double v : img.pixels()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  auto out = open_out(path, std::ios::binary);
  out << "P5\n# mrt min=" << format_double(lo) << " max=" << format_double(hi) << "\n"
      << img.width() << ' ' << img.height() << "\n65535\n";
  const double span = hi > lo ? hi - lo : 1.0;
  for (double v : img.pixels()) {
    const auto q = static_cast<std::uint16_t>(std::lround(std::clamp((v - lo) / span, 0.0, 1.0) * 65535.0));
    const char bytes[2] = {static_cast<char>(q >> 8), static_cast<char>(q & 0xff)};
    out.write(bytes, 2);
  }
  if (!out) throw Error("PGM: write failed for '" + path + "'");
}

ImageGrid read_pgm16(const std::string& path) {
  auto in = open_in(path, std::ios::binary);
  std::string comments;
  if (pgm_token(in, comments) != "P5") throw ParseError("PGM: not a binary graymap");
  const auto w = static_cast<std::size_t>(parse_double(pgm_token(in, comments), "PGM width"));
  const auto h = static_cast<std::size_t>(parse_double(pgm_token(in, comments), "PGM height"));
  if (parse_double(pgm_token(in, comments), "PGM maxval") != 65535.0) throw ParseError("PGM: expected maxval 65535");
  double lo = 0.0, hi = 1.0;
  if (const auto pos = comments.find("mrt min="); pos != std::string::npos) {
    std::istringstream cs(comments.substr(pos + 8));
    std::string a, b;
    std::getline(cs, a, ' ');
    cs >> b;
    lo = parse_double(a, "PGM min");
    hi = parse_double(b.substr(b.find('=') + 1), "PGM max");
  }
  ImageGrid img(w, h);
  const double span = hi > lo ? hi - lo : 1.0;
  for (double& v : img.pixels()) {
    unsigned char bytes[2];
    if (!in.read(reinterpret_cast<char*>(bytes), 2)) throw ParseError("PGM: truncated pixel data");
    v = lo + span * ((bytes[0] << 8) | bytes[1]) / 65535.0;
  }
  return img;
}

void write_raw(const std::string& path, const ImageGrid& img) {
  auto out = open_out(path, std::ios::binary);
  for (double v : img.pixels()) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
  if (!out) throw Error("raw: write failed for '" + path + "'");
  auto hdr = open_out(path + ".hdr");
  hdr << "width " << img.width() << "\nheight " << img.height() << "\nextent -1 1 -1 1\n"
      << "dtype float64-le\norder row-major, row 0 at y = +1\n";
}

ImageGrid read_raw(const std::string& path) {
  auto hdr = open_in(path + ".hdr");
  std::size_t w = 0, h = 0;
  std::string key;
  while (hdr >> key) {
    if (key == "width") {
      hdr >> w;
    } else if (key == "height") {
      hdr >> h;
    } else {
      std::string rest;
      std::getline(hdr, rest);
    }
  }
  if (w == 0 || h == 0) throw ParseError("raw header: missing width or height");
  ImageGrid img(w, h);
  auto in = open_in(path, std::ios::binary);
  for (double& v : img.pixels()) {
    std::uint64_t bits = 0;
    if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits)) throw ParseError("raw: truncated pixel data");
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    v = std::bit_cast<double>(bits);
  }
  return img;
}

}  // namespace mrt
