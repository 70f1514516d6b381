// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pkern/error.hpp"
#include "pkern/types.hpp"

namespace pkern {

enum class StencilKind { Pt3, Pt5, Pt7, Pt9, Pt27 };

inline int stencil_length(StencilKind k) {
  switch (k) {
    case StencilKind::Pt3: return 3;
    case StencilKind::Pt5: return 5;
    case StencilKind::Pt7: return 7;
    case StencilKind::Pt9: return 9;
    case StencilKind::Pt27: return 27;
  }
  return 0;
}

inline int stencil_dimensionality(StencilKind k) {
  switch (k) {
    case StencilKind::Pt3: return 1;
    case StencilKind::Pt5:
    case StencilKind::Pt9: return 2;
    case StencilKind::Pt7:
    case StencilKind::Pt27: return 3;
  }
  return 0;
}

inline std::string_view to_string(StencilKind k) {
  switch (k) {
    case StencilKind::Pt3: return "3pt";
    case StencilKind::Pt5: return "5pt";
    case StencilKind::Pt7: return "7pt";
    case StencilKind::Pt9: return "9pt";
    case StencilKind::Pt27: return "27pt";
  }
  return "?";
}

inline std::optional<StencilKind> parse_stencil_kind(std::string_view s) {
  if (s == "3pt") return StencilKind::Pt3;
  if (s == "5pt") return StencilKind::Pt5;
  if (s == "7pt") return StencilKind::Pt7;
  if (s == "9pt") return StencilKind::Pt9;
  if (s == "27pt") return StencilKind::Pt27;
  return std::nullopt;
}

// Box of lattice points, x fastest: row(i, j, k) = i + nx * (j + ny * k).
// Unused trailing dimensions are 1.
struct StencilSpec {
  StencilKind kind = StencilKind::Pt3;
  std::array<ordinal_t, 3> dims{1, 1, 1};

  StencilSpec() = default;
  StencilSpec(StencilKind k, std::vector<ordinal_t> box) : kind(k) {
    if (static_cast<int>(box.size()) != stencil_dimensionality(k)) {
      throw DimensionError(std::string(to_string(k)) + " stencil needs " +
                           std::to_string(stencil_dimensionality(k)) + " box dimensions, got " +
                           std::to_string(box.size()));
    }
    for (std::size_t d = 0; d < box.size(); ++d) dims[d] = box[d];
  }

  int ndims() const { return stencil_dimensionality(kind); }
  std::int64_t num_points() const {
    return static_cast<std::int64_t>(dims[0]) * dims[1] * dims[2];
  }
  bool operator==(const StencilSpec&) const = default;
};

// Column offsets (relative to the row index) of the stencil neighbours, in
// ascending order, for the box described by spec.
inline std::vector<std::int64_t> stencil_offsets(const StencilSpec& spec) {
  const std::int64_t nx = spec.dims[0];
  const std::int64_t nxy = nx * spec.dims[1];
  std::vector<std::int64_t> offs;
  switch (spec.kind) {
    case StencilKind::Pt3: offs = {-1, 0, 1}; break;
    case StencilKind::Pt5: offs = {-nx, -1, 0, 1, nx}; break;
    case StencilKind::Pt7: offs = {-nxy, -nx, -1, 0, 1, nx, nxy}; break;
    case StencilKind::Pt9:
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) offs.push_back(dj * nx + di);
      break;
    case StencilKind::Pt27:
      for (int dk = -1; dk <= 1; ++dk)
        for (int dj = -1; dj <= 1; ++dj)
          for (int di = -1; di <= 1; ++di) offs.push_back(dk * nxy + dj * nx + di);
      break;
  }
  return offs;
}

// Lattice displacement (di, dj, dk) of each stencil entry, same order as
// stencil_offsets.
inline std::vector<std::array<int, 3>> stencil_displacements(StencilKind kind) {
  std::vector<std::array<int, 3>> d;
  switch (kind) {
    case StencilKind::Pt3: d = {{-1, 0, 0}, {0, 0, 0}, {1, 0, 0}}; break;
    case StencilKind::Pt5: d = {{0, -1, 0}, {-1, 0, 0}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}}; break;
    case StencilKind::Pt7:
      d = {{0, 0, -1}, {0, -1, 0}, {-1, 0, 0}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
      break;
    case StencilKind::Pt9:
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) d.push_back({di, dj, 0});
      break;
    case StencilKind::Pt27:
      for (int dk = -1; dk <= 1; ++dk)
        for (int dj = -1; dj <= 1; ++dj)
          for (int di = -1; di <= 1; ++di) d.push_back({di, dj, dk});
      break;
  }
  return d;
}

}  // namespace pkern
