#pragma once

// Flat-file formats: support-matrix CSV, trajectory CSV, polygon vertex
// dumps, and the FNV-1a checksum recorded in run manifests.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conelevy/embedding.hpp"
#include "conelevy/fuzzy.hpp"
#include "conelevy/levy.hpp"

namespace conelevy::io {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest-round-trip-safe decimal: 17 significant digits.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

namespace detail {

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw FormatError(where + ": not a number '" + s + "'");
  return v;
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace detail

/// Header "alpha,theta_0,...,theta_{n-1}" (radians), then one row per level.
inline std::string support_csv(const EmbeddedFunction& f) {
  std::string out = "alpha";
  for (std::size_t k = 0; k < f.cols(); ++k) out += "," + fmt17(f.sphere_grid().angle(k));
  out += "\n";
  for (std::size_t i = 0; i < f.rows(); ++i) {
    out += fmt17(f.alpha_grid()[i]);
    for (std::size_t k = 0; k < f.cols(); ++k) out += "," + fmt17(f(i, k));
    out += "\n";
  }
  return out;
}

inline EmbeddedFunction parse_support_csv(const std::string& text) {
  const auto lines = detail::lines_of(text);
  if (lines.size() < 3) throw FormatError("support CSV: need a header and at least two rows");
  const auto header = detail::split(lines[0], ',');
  if (header.empty() || header[0] != "alpha") throw FormatError("support CSV: header must start with 'alpha'");
  const std::size_t n = header.size() - 1;
  std::vector<double> alphas, values;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = detail::split(lines[r], ',');
    if (cells.size() != n + 1) throw FormatError("support CSV line " + std::to_string(r + 1) + ": wrong column count");
    alphas.push_back(detail::parse_double(cells[0], "support CSV line " + std::to_string(r + 1)));
    for (std::size_t k = 1; k <= n; ++k) {
      values.push_back(detail::parse_double(cells[k], "support CSV line " + std::to_string(r + 1)));
    }
  }
  return EmbeddedFunction(AlphaGrid(std::move(alphas)), SphereGrid(n), std::move(values));
}

/// Header "time,magnitude,atom_index", one row per jump.
inline std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "time,magnitude,atom_index\n";
  for (const Jump& j : traj.jumps) {
    out += fmt17(j.time) + "," + fmt17(j.magnitude) + "," + std::to_string(j.atom) + "\n";
  }
  return out;
}

/// Parses jump rows. Values are not range-checked here so that tampered
/// files reach the pathwise checks.
inline std::vector<Jump> parse_trajectory_csv(const std::string& text, const std::string& name = "trajectory") {
  const auto lines = detail::lines_of(text);
  if (lines.empty() || lines[0] != "time,magnitude,atom_index") throw FormatError(name + ": bad header");
  std::vector<Jump> jumps;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::string where = name + " line " + std::to_string(r + 1);
    const auto cells = detail::split(lines[r], ',');
    if (cells.size() != 3) throw FormatError(where + ": expected 3 columns");
    const double idx = detail::parse_double(cells[2], where);
    if (idx < 0 || idx != static_cast<double>(static_cast<std::size_t>(idx))) throw FormatError(where + ": bad atom index");
    jumps.push_back({detail::parse_double(cells[0], where), detail::parse_double(cells[1], where),
                     static_cast<std::size_t>(idx)});
  }
  return jumps;
}

/// Header "level,alpha,vertex,x,y", CCW vertices per level.
inline std::string vertex_dump_csv(const FuzzyVector& x) {
  std::string out = "level,alpha,vertex,x,y\n";
  for (std::size_t i = 0; i < x.levels(); ++i) {
    const auto& v = x.cut(i).vertices();
    for (std::size_t q = 0; q < v.size(); ++q) {
      out += std::to_string(i) + "," + fmt17(x.grid()[i]) + "," + std::to_string(q) + "," + fmt17(v[q].x) + "," +
             fmt17(v[q].y) + "\n";
    }
  }
  return out;
}

}  // namespace conelevy::io
