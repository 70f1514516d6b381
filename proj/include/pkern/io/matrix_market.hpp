// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// MatrixMarket text format. Coordinate and array formats with real,
// integer or pattern fields and general, symmetric or skew-symmetric
// storage are read; symmetric storage is expanded and pattern entries get
// the value 1.0. Complex and hermitian files are rejected.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pkern/crs.hpp"
#include "pkern/error.hpp"

namespace pkern::io {

enum class MmFormat { Coordinate, Array };
enum class MmField { Real, Integer, Pattern };
enum class MmSymmetry { General, Symmetric, SkewSymmetric };

struct MatrixMarketHeader {
  MmFormat format = MmFormat::Coordinate;
  MmField field = MmField::Real;
  MmSymmetry symmetry = MmSymmetry::General;
};

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline MatrixMarketHeader parse_banner(const std::string& line) {
  std::istringstream in(line);
  std::string tag, object, format, field, symmetry;
  in >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", 1);
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") throw ParseError("unsupported object '" + object + "'", 1);
  MatrixMarketHeader h;
  if (format == "coordinate") {
    h.format = MmFormat::Coordinate;
  } else if (format == "array") {
    h.format = MmFormat::Array;
  } else {
    throw ParseError("unsupported format '" + format + "'", 1);
  }
  if (field == "real" || field == "double") {
    h.field = MmField::Real;
  } else if (field == "integer") {
    h.field = MmField::Integer;
  } else if (field == "pattern") {
    h.field = MmField::Pattern;
  } else {
    throw ParseError("unsupported field type '" + field + "'", 1);
  }
  if (h.format == MmFormat::Array && h.field == MmField::Pattern) {
    throw ParseError("array format cannot have a pattern field", 1);
  }
  if (symmetry == "general") {
    h.symmetry = MmSymmetry::General;
  } else if (symmetry == "symmetric") {
    h.symmetry = MmSymmetry::Symmetric;
  } else if (symmetry == "skew-symmetric") {
    h.symmetry = MmSymmetry::SkewSymmetric;
  } else {
    throw ParseError("unsupported symmetry '" + symmetry + "'", 1);
  }
  return h;
}

// Next line that is neither blank nor a comment.
inline bool next_data_line(std::istream& in, std::string& line, std::int64_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '%') continue;
    return true;
  }
  return false;
}

inline bool trailing_garbage(std::istringstream& ss) {
  std::string rest;
  return static_cast<bool>(ss >> rest);
}

}  // namespace detail

inline MatrixMarketHeader read_matrix_market_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty input", 1);
  return detail::parse_banner(line);
}

inline CrsMatrix<double> read_matrix_market(std::istream& in) {
  std::string line;
  std::int64_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError("empty input", 1);
  const MatrixMarketHeader h = detail::parse_banner(line);

  if (!detail::next_data_line(in, line, lineno)) throw ParseError("missing size line", lineno + 1);
  std::int64_t nrows = -1, ncols = -1, nnz = -1;
  {
    std::istringstream ss(line);
    if (h.format == MmFormat::Coordinate) {
      if (!(ss >> nrows >> ncols >> nnz) || detail::trailing_garbage(ss)) {
        throw ParseError("size line must be 'rows cols nnz'", lineno);
      }
    } else {
      if (!(ss >> nrows >> ncols) || detail::trailing_garbage(ss)) {
        throw ParseError("size line must be 'rows cols'", lineno);
      }
    }
  }
  if (nrows < 0 || ncols < 0 || (h.format == MmFormat::Coordinate && nnz < 0) || nrows > std::numeric_limits<ordinal_t>::max() ||
      ncols > std::numeric_limits<ordinal_t>::max()) {
    throw ParseError("invalid matrix size", lineno);
  }
  if (h.symmetry != MmSymmetry::General && nrows != ncols) {
    throw ParseError("symmetric storage requires a square matrix", lineno);
  }

  std::vector<ordinal_t> ri, ci;
  std::vector<double> vals;
  auto add = [&](std::int64_t i, std::int64_t j, double v) {
    ri.push_back(static_cast<ordinal_t>(i));
    ci.push_back(static_cast<ordinal_t>(j));
    vals.push_back(v);
    if (i != j && h.symmetry != MmSymmetry::General) {
      ri.push_back(static_cast<ordinal_t>(j));
      ci.push_back(static_cast<ordinal_t>(i));
      vals.push_back(h.symmetry == MmSymmetry::SkewSymmetric ? -v : v);
    }
  };

  if (h.format == MmFormat::Coordinate) {
    ri.reserve(static_cast<std::size_t>(nnz));
    for (std::int64_t k = 0; k < nnz; ++k) {
      if (!detail::next_data_line(in, line, lineno)) {
        throw ParseError("expected " + std::to_string(nnz) + " entries, found " + std::to_string(k), lineno + 1);
      }
      std::istringstream ss(line);
      std::int64_t i = 0, j = 0;
      double v = 1.0;
      if (!(ss >> i >> j)) throw ParseError("malformed entry", lineno);
      if (h.field != MmField::Pattern && !(ss >> v)) throw ParseError("missing value", lineno);
      if (detail::trailing_garbage(ss)) throw ParseError("unexpected trailing data", lineno);
      if (i < 1 || i > nrows || j < 1 || j > ncols) {
        throw ParseError("index (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range", lineno);
      }
      if (h.symmetry != MmSymmetry::General && j > i) {
        throw ParseError("entry above the diagonal in symmetric storage", lineno);
      }
      add(i - 1, j - 1, v);
    }
  } else {
    // Column-major; symmetric storage lists the lower triangle only.
    for (std::int64_t j = 0; j < ncols; ++j) {
      const std::int64_t i0 = h.symmetry == MmSymmetry::General ? 0 : (h.symmetry == MmSymmetry::Symmetric ? j : j + 1);
      for (std::int64_t i = i0; i < nrows; ++i) {
        if (!detail::next_data_line(in, line, lineno)) throw ParseError("too few array entries", lineno + 1);
        std::istringstream ss(line);
        double v = 0.0;
        if (!(ss >> v) || detail::trailing_garbage(ss)) throw ParseError("malformed value", lineno);
        add(i, j, v);
      }
    }
  }
  if (detail::next_data_line(in, line, lineno)) throw ParseError("more entries than declared", lineno);
  return canonicalize(from_triplets<double>(static_cast<ordinal_t>(nrows), static_cast<ordinal_t>(ncols), ri, ci, vals));
}

inline CrsMatrix<double> read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_matrix_market(in);
}

// Writes the canonical form as 'coordinate real general' with 17
// significant digits, enough to read every double back exactly.
inline void write_matrix_market(const CrsMatrix<double>& m, std::ostream& out) {
  const CrsMatrix<double> c = canonicalize(m);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << c.num_rows() << ' ' << c.num_cols() << ' ' << c.nnz() << '\n';
  out << std::setprecision(17);
  for (ordinal_t i = 0; i < c.num_rows(); ++i) {
    const auto r = c.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) out << i + 1 << ' ' << r.cols[k] + 1 << ' ' << r.vals[k] << '\n';
  }
  if (!out) throw Error("write_matrix_market: output stream failed");
}

inline void write_matrix_market(const CrsMatrix<double>& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_matrix_market(m, out);
  out.flush();
  if (!out) throw Error("write_matrix_market: failed writing " + path.string());
}

}  // namespace pkern::io
