#pragma once

// WLF1 field files: five text header lines, a blank line, then one block of
// little-endian binary64 values per component.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wulff_lab/error.hpp"
#include "wulff_lab/field.hpp"

namespace wlab {

namespace detail {

inline std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::MalformedHeader, std::string("bad number in ") + what + ": '" + s + "'");
  }
}

inline long parse_long(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::MalformedHeader, std::string("bad integer in ") + what + ": '" + s + "'");
  }
}

inline std::string expect_key(const std::string& token, const std::string& key) {
  if (token.rfind(key + "=", 0) != 0)
    throw Error(Errc::MalformedHeader, "expected '" + key + "=' but found '" + token + "'");
  return token.substr(key.size() + 1);
}

inline std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

/// Writes bytes to a sibling temp file and renames it over `path`.
inline void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(Errc::IoError, "cannot open " + tmp.string() + " for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw Error(Errc::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::IoError, "rename to " + path.string() + " failed: " + ec.message());
}

}  // namespace detail

inline std::string encode_field(const GridField& f) {
  const GridGeometry& g = f.geometry();
  std::ostringstream os;
  os << "WLF1\n";
  os << "n=" << g.dim() << " N=" << f.rows() << " shape=" << to_string(f.shape()) << "\n";
  os << "cells=";
  for (int a = 0; a < g.dim(); ++a) os << (a ? "x" : "") << g.cells(a);
  os << "\nextent=";
  for (int a = 0; a < g.dim(); ++a) os << (a ? "," : "") << detail::fmt_g17(g.extent(a));
  os << "\norigin=";
  for (int a = 0; a < g.dim(); ++a) os << (a ? "," : "") << detail::fmt_g17(g.origin(a));
  os << "\n\n";
  std::string out = os.str();
  auto vals = f.values();
  std::size_t head = out.size();
  out.resize(head + vals.size() * 8);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    std::uint64_t bits = detail::to_le(std::bit_cast<std::uint64_t>(vals[i]));
    std::memcpy(out.data() + head + 8 * i, &bits, 8);
  }
  return out;
}

inline GridField decode_field(const std::string& bytes) {
  std::size_t pos = 0;
  auto next_line = [&]() {
    std::size_t e = bytes.find('\n', pos);
    if (e == std::string::npos) throw Error(Errc::MalformedHeader, "truncated header");
    std::string line = bytes.substr(pos, e - pos);
    pos = e + 1;
    return line;
  };
  if (next_line() != "WLF1") throw Error(Errc::MalformedHeader, "missing WLF1 magic");

  auto toks = detail::split(next_line(), ' ');
  if (toks.size() != 3) throw Error(Errc::MalformedHeader, "line 2 must hold n=, N= and shape=");
  long n = detail::parse_long(detail::expect_key(toks[0], "n"), "n");
  long rows = detail::parse_long(detail::expect_key(toks[1], "N"), "N");
  std::string shape_s = detail::expect_key(toks[2], "shape");
  Shape shape;
  if (shape_s == "scalar")
    shape = Shape::Scalar;
  else if (shape_s == "vector")
    shape = Shape::Vector;
  else if (shape_s == "matrix")
    shape = Shape::Matrix;
  else
    throw Error(Errc::MalformedHeader, "unknown shape '" + shape_s + "'");

  auto cell_toks = detail::split(detail::expect_key(next_line(), "cells"), 'x');
  auto ext_toks = detail::split(detail::expect_key(next_line(), "extent"), ',');
  auto org_toks = detail::split(detail::expect_key(next_line(), "origin"), ',');
  if (!next_line().empty()) throw Error(Errc::MalformedHeader, "expected blank line after header");

  if (n < 2 || static_cast<long>(cell_toks.size()) != n || static_cast<long>(ext_toks.size()) != n ||
      static_cast<long>(org_toks.size()) != n)
    throw Error(Errc::DimensionMismatch, "axis lists do not match n=" + std::to_string(n));
  if (shape == Shape::Scalar && rows != 1) throw Error(Errc::DimensionMismatch, "scalar field with N != 1");
  if (rows < 1) throw Error(Errc::DimensionMismatch, "N must be >= 1");

  std::vector<int> cells;
  std::vector<double> ext, org;
  for (long a = 0; a < n; ++a) {
    long c = detail::parse_long(cell_toks[a], "cells");
    if (c <= 0) throw Error(Errc::MalformedHeader, "cell counts must be positive");
    cells.push_back(static_cast<int>(c));
    ext.push_back(detail::parse_double(ext_toks[a], "extent"));
    org.push_back(detail::parse_double(org_toks[a], "origin"));
  }
  GridGeometry g(cells, ext, org);
  std::size_t comps = GridField::component_count(g, shape, static_cast<int>(rows));
  std::size_t count = comps * g.cell_count();
  if (bytes.size() - pos != count * 8)
    throw Error(Errc::MalformedHeader, "payload holds " + std::to_string((bytes.size() - pos) / 8) +
                                           " values, header declares " + std::to_string(count));
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, bytes.data() + pos + 8 * i, 8);
    v[i] = std::bit_cast<double>(detail::to_le(bits));
    if (!std::isfinite(v[i]))
      throw Error(Errc::NonFiniteValue, "non-finite sample at payload index " + std::to_string(i));
  }
  return GridField(g, shape, static_cast<int>(rows), std::move(v));
}

inline void write_field(const std::filesystem::path& path, const GridField& f) {
  detail::atomic_write(path, encode_field(f));
}

inline GridField read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::IoError, "cannot open field file " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return decode_field(ss.str());
}

}  // namespace wlab
