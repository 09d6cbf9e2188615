#pragma once

// Sample files. Binary: little-endian float64 pairs (re, im), optionally
// preceded by a 16-byte header "GFDMBLK1" + u32 count + u32 flags.
// CSV: "index,re,im" per line with a header row.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "gfdm/errors.hpp"
#include "gfdm/numerics.hpp"

namespace gfdm {

class IoError : public Error {
 public:
  using Error::Error;
};

enum class SampleFormat { Binary, Csv };

inline constexpr std::array<char, 8> kBlockMagic{'G', 'F', 'D', 'M', 'B', 'L', 'K', '1'};
inline constexpr std::uint32_t kFlagSymbolGrid = 1u;

struct SampleFile {
  ComplexVec samples;
  std::uint32_t flags = 0;
  bool had_header = false;
};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

inline std::uint32_t get_u32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

inline void put_f64(std::string& out, double d) {
  const auto bits = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFFu));
}

inline double get_f64(const char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return std::bit_cast<double>(bits);
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spill(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace detail

[[nodiscard]] inline std::string encode_binary(std::span<const cplx> v, bool header = true,
                                               std::uint32_t flags = 0) {
  std::string out;
  out.reserve(16 + 16 * v.size());
  if (header) {
    out.append(kBlockMagic.data(), kBlockMagic.size());
    detail::put_u32(out, static_cast<std::uint32_t>(v.size()));
    detail::put_u32(out, flags);
  }
  for (const auto& z : v) {
    detail::put_f64(out, z.real());
    detail::put_f64(out, z.imag());
  }
  return out;
}

[[nodiscard]] inline SampleFile decode_binary(const std::string& bytes) {
  SampleFile f;
  std::size_t off = 0;
  std::size_t expected = 0;
  if (bytes.size() >= 16 && std::memcmp(bytes.data(), kBlockMagic.data(), 8) == 0) {
    f.had_header = true;
    expected = detail::get_u32(bytes.data() + 8);
    f.flags = detail::get_u32(bytes.data() + 12);
    off = 16;
  }
  const std::size_t payload = bytes.size() - off;
  if (payload % 16 != 0) throw IoError("binary sample payload is not a multiple of 16 bytes");
  const std::size_t n = payload / 16;
  if (f.had_header && n != expected) {
    throw IoError("binary header announces " + std::to_string(expected) + " samples, file holds " +
                  std::to_string(n));
  }
  f.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const char* p = bytes.data() + off + 16 * i;
    f.samples[i] = {detail::get_f64(p), detail::get_f64(p + 8)};
  }
  return f;
}

[[nodiscard]] inline std::string encode_csv(std::span<const cplx> v) {
  std::ostringstream os;
  os << "index,re,im\n" << std::setprecision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << i << ',' << v[i].real() << ',' << v[i].imag() << '\n';
  return os.str();
}

[[nodiscard]] inline SampleFile decode_csv(const std::string& text) {
  SampleFile f;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("index", 0) == 0) continue;
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c, ',')) {
      throw IoError("CSV line " + std::to_string(lineno) + ": expected index,re,im");
    }
    try {
      f.samples.emplace_back(std::stod(b), std::stod(c));
    } catch (const std::exception&) {
      throw IoError("CSV line " + std::to_string(lineno) + ": bad number");
    }
  }
  return f;
}

inline void write_samples(const std::filesystem::path& path, std::span<const cplx> v,
                          SampleFormat fmt, std::uint32_t flags = 0) {
  detail::spill(path, fmt == SampleFormat::Binary ? encode_binary(v, true, flags) : encode_csv(v));
}

[[nodiscard]] inline SampleFile read_samples(const std::filesystem::path& path, SampleFormat fmt) {
  const std::string bytes = detail::slurp(path);
  return fmt == SampleFormat::Binary ? decode_binary(bytes) : decode_csv(bytes);
}

/// K x M matrix as CSV with columns row,col,re,im.
inline void write_matrix_csv(const std::filesystem::path& path, const ComplexMat& m) {
  std::ostringstream os;
  os << "row,col,re,im\n" << std::setprecision(17);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      os << r << ',' << c << ',' << m(r, c).real() << ',' << m(r, c).imag() << '\n';
  detail::spill(path, os.str());
}

[[nodiscard]] inline ComplexMat read_matrix_csv(const std::filesystem::path& path) {
  std::istringstream in(detail::slurp(path));
  std::string line;
  struct Entry {
    std::size_t r, c;
    cplx v;
  };
  std::vector<Entry> entries;
  std::size_t rows = 0, cols = 0;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f[4];
    for (auto& s : f) {
      if (!std::getline(ls, s, ',')) throw IoError("matrix CSV: expected row,col,re,im");
    }
    Entry e{std::stoul(f[0]), std::stoul(f[1]), {std::stod(f[2]), std::stod(f[3])}};
    rows = std::max(rows, e.r + 1);
    cols = std::max(cols, e.c + 1);
    entries.push_back(e);
  }
  if (entries.size() != rows * cols) throw IoError("matrix CSV: incomplete matrix");
  ComplexMat m(rows, cols);
  for (const auto& e : entries) m(e.r, e.c) = e.v;
  return m;
}

}  // namespace gfdm
