#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mrt/forward.hpp"

namespace mrt {

/// On-disk content of a sinogram file. Only omega, T, lambda, M, K and
/// K_prime are stored; lambda = 0 means "not folded / unknown".
struct SinogramFile {
  SamplingParams params;
  std::vector<SampleSeq> rows;
};

enum class SinogramFormat { binary, csv };

/// Binary layout (little-endian): "MRTS", u32 version=1, u32 M, u32 K,
/// u32 K_prime, f64 omega, f64 T, f64 lambda, then M*(K_prime+K+1) f64,
/// row-major by angle, each row covering k = -K_prime..K.
void write_sinogram_binary(std::ostream& out, const SamplingParams& params, const std::vector<SampleSeq>& rows);
SinogramFile read_sinogram_binary(std::istream& in);

/// Text layout: "# MRTS-CSV version=1 M=.. K=.. K_prime=.. omega=.. T=.. lambda=..",
/// then one comma-separated row per angle. Numbers are written in shortest
/// round-trip form, so reading back is bit-exact.
void write_sinogram_csv(std::ostream& out, const SamplingParams& params, const std::vector<SampleSeq>& rows);
SinogramFile read_sinogram_csv(std::istream& in);

/// Plain numeric matrix, one line per row, comma or whitespace separated.
/// Blank lines and lines starting with '#' are skipped.
std::vector<std::vector<double>> read_csv_matrix(std::istream& in);

void save_sinogram(const std::string& path, const SamplingParams& params, const std::vector<SampleSeq>& rows,
                   SinogramFormat fmt);
/// Detects the format from the file's first bytes.
SinogramFile load_sinogram(const std::string& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
/// Strict parse of a whole token; throws ParseError with `where` in the message.
double parse_double(std::string_view token, const std::string& where);

}  // namespace mrt
