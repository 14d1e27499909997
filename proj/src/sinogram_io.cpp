#include "mrt/sinogram_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace mrt {

namespace {

constexpr char kMagic[4] = {'M', 'R', 'T', 'S'};
constexpr std::uint32_t kVersion = 1;
const std::string kCsvTag = "# MRTS-CSV";

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class U>
U to_little(U v) {
  if constexpr (std::endian::native == std::endian::big) {
    U r = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) r = static_cast<U>((r << 8) | ((v >> (8 * i)) & 0xff));
    return r;
  }
  return v;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& out, double d) {
  auto v = to_little(std::bit_cast<std::uint64_t>(d));
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in, const char* field) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ParseError(std::string("MRTS: truncated header at ") + field);
  return to_little(v);
}

double get_f64(std::istream& in, const char* field) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ParseError(std::string("MRTS: truncated ") + field);
  return std::bit_cast<double>(to_little(v));
}

void check_layout(const SamplingParams& params, const std::vector<SampleSeq>& rows) {
  if (rows.size() != static_cast<std::size_t>(params.M)) throw SizeError("sinogram: row count differs from M");
  for (const auto& r : rows) {
    if (r.base() != -params.K_prime || r.last() != params.K) throw SizeError("sinogram: row range is not [-K', K]");
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits on commas, or on whitespace if the line has no comma.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  if (line.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    for (;;) {
      const std::size_t pos = line.find(',', start);
      out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    return out;
  }
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool skippable(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw NumericError("format_double failed");
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view token, const std::string& where) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(where + ": cannot parse '" + std::string(token) + "' as a number");
  }
  return v;
}

void write_sinogram_binary(std::ostream& out, const SamplingParams& params, const std::vector<SampleSeq>& rows) {
  check_layout(params, rows);
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(params.M));
  put_u32(out, static_cast<std::uint32_t>(params.K));
  put_u32(out, static_cast<std::uint32_t>(params.K_prime));
  put_f64(out, params.omega);
  put_f64(out, params.T);
  put_f64(out, params.lambda);
  for (const auto& r : rows) {
    for (double v : r.values()) put_f64(out, v);
  }
  if (!out) throw Error("MRTS: write failed");
}

SinogramFile read_sinogram_binary(std::istream& in) {
  char magic[4] = {};
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw ParseError("MRTS: bad magic");
  const std::uint32_t version = get_u32(in, "version");
  if (version != kVersion) throw ParseError("MRTS: unsupported version " + std::to_string(version));
  SinogramFile f;
  f.params.M = static_cast<int>(get_u32(in, "M"));
  f.params.K = get_u32(in, "K");
  f.params.K_prime = get_u32(in, "K_prime");
  f.params.omega = get_f64(in, "omega");
  f.params.T = get_f64(in, "T");
  f.params.lambda = get_f64(in, "lambda");
  f.params.validate();
  const std::size_t len = f.params.row_length();
  f.rows.reserve(static_cast<std::size_t>(f.params.M));
  for (int m = 0; m < f.params.M; ++m) {
    std::vector<double> v(len);
    for (std::size_t i = 0; i < len; ++i) {
      std::uint64_t raw = 0;
      if (!in.read(reinterpret_cast<char*>(&raw), sizeof raw)) {
        throw ParseError("MRTS: truncated data at row " + std::to_string(m) + ", column " + std::to_string(i));
      }
      v[i] = std::bit_cast<double>(to_little(raw));
    }
    f.rows.emplace_back(-f.params.K_prime, std::move(v));
  }
  return f;
}

void write_sinogram_csv(std::ostream& out, const SamplingParams& params, const std::vector<SampleSeq>& rows) {
  check_layout(params, rows);
  out << kCsvTag << " version=" << kVersion << " M=" << params.M << " K=" << params.K << " K_prime=" << params.K_prime
      << " omega=" << format_double(params.omega) << " T=" << format_double(params.T)
      << " lambda=" << format_double(params.lambda) << '\n';
  for (const auto& r : rows) {
    bool first = true;
    for (double v : r.values()) {
      if (!first) out << ',';
      out << format_double(v);
      first = false;
    }
    out << '\n';
  }
  if (!out) throw Error("MRTS-CSV: write failed");
}

SinogramFile read_sinogram_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind(kCsvTag, 0) != 0) throw ParseError("MRTS-CSV: missing header line");
  std::map<std::string, std::string> kv;
  std::istringstream hs(header.substr(kCsvTag.size()));
  std::string item;
  while (hs >> item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("MRTS-CSV header: malformed field '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  auto field = [&](const char* key) -> double {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(std::string("MRTS-CSV header: missing ") + key);
    return parse_double(it->second, std::string("MRTS-CSV header field ") + key);
  };
  if (field("version") != kVersion) throw ParseError("MRTS-CSV: unsupported version");
  SinogramFile f;
  f.params.M = static_cast<int>(field("M"));
  f.params.K = static_cast<Index>(field("K"));
  f.params.K_prime = static_cast<Index>(field("K_prime"));
  f.params.omega = field("omega");
  f.params.T = field("T");
  f.params.lambda = field("lambda");
  f.params.validate();
  auto matrix = read_csv_matrix(in);
  if (matrix.size() != static_cast<std::size_t>(f.params.M)) {
    throw ParseError("MRTS-CSV: expected " + std::to_string(f.params.M) + " rows, found " + std::to_string(matrix.size()));
  }
  for (std::size_t m = 0; m < matrix.size(); ++m) {
    if (matrix[m].size() != f.params.row_length()) {
      throw ParseError("MRTS-CSV: row " + std::to_string(m + 1) + " has " + std::to_string(matrix[m].size()) +
                       " columns, expected " + std::to_string(f.params.row_length()));
    }
    f.rows.emplace_back(-f.params.K_prime, std::move(matrix[m]));
  }
  return f;
}

std::vector<std::vector<double>> read_csv_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto fields = split_fields(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      row.push_back(parse_double(fields[c], "row " + std::to_string(line_no) + ", column " + std::to_string(c + 1)));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("row " + std::to_string(line_no) + ": has " + std::to_string(row.size()) +
                       " columns, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows");
  return rows;
}

void save_sinogram(const std::string& path, const SamplingParams& params, const std::vector<SampleSeq>& rows,
                   SinogramFormat fmt) {
  std::ofstream out(path, fmt == SinogramFormat::binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  if (fmt == SinogramFormat::binary) {
    write_sinogram_binary(out, params, rows);
  } else {
    write_sinogram_csv(out, params, rows);
  }
}

SinogramFile load_sinogram(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  char head[4] = {};
  in.read(head, 4);
  in.clear();
  in.seekg(0);
  if (std::memcmp(head, kMagic, 4) == 0) return read_sinogram_binary(in);
  return read_sinogram_csv(in);
}

}  // namespace mrt
