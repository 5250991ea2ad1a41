// Copyright 2026 The ZTD Toolkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ztd/errors.hpp"
#include "ztd/geometry.hpp"

namespace ztd {

/// Pixel category of a supervision mask. The numeric values are the on-disk
/// byte encoding.
enum class Tri : std::uint8_t { neg = 0, pos = 1, ign = 255 };

/// Row-major 2D grid. `Tag` keeps masks of different meaning apart.
template <typename T, typename Tag>
class Raster {
 public:
  using value_type = T;

  Raster(int height, int width, T fill = T{}) : height_(height), width_(width) {
    if (height <= 0 || width <= 0) {
      throw ParameterError("raster dimensions must be positive, got " + std::to_string(height) +
                           "x" + std::to_string(width));
    }
    cells_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
  }

  Raster(int height, int width, std::vector<T> cells) : Raster(height, width) {
    if (cells.size() != cells_.size()) throw ParameterError("raster cell count mismatch");
    cells_ = std::move(cells);
  }

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return cells_.size(); }

  T& at(int row, int col) { return cells_[index(row, col)]; }
  const T& at(int row, int col) const { return cells_[index(row, col)]; }

  std::span<T> cells() noexcept { return cells_; }
  std::span<const T> cells() const noexcept { return cells_; }

  bool same_shape(const Raster& o) const noexcept {
    return height_ == o.height_ && width_ == o.width_;
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int height_;
  int width_;
  std::vector<T> cells_;
};

struct BinaryTag {};
struct TriStateTag {};
struct ProbabilityTag {};
struct ImageTag {};

/// Cells are 0 or 1.
using BinaryMask = Raster<std::uint8_t, BinaryTag>;
using TriStateMask = Raster<Tri, TriStateTag>;
/// Cells lie in [0, 1].
using ProbabilityMap = Raster<float, ProbabilityTag>;
/// 8-bit grayscale intensities.
using GrayImage = Raster<std::uint8_t, ImageTag>;

inline void require_same_shape(int h0, int w0, int h1, int w1, const char* what) {
  if (h0 != h1 || w0 != w1) {
    throw ParameterError(std::string(what) + ": dimension mismatch " + std::to_string(h0) + "x" +
                         std::to_string(w0) + " vs " + std::to_string(h1) + "x" +
                         std::to_string(w1));
  }
}

/// Throws unless every cell of `pm` lies in [0, 1].
inline void validate_probabilities(const ProbabilityMap& pm) {
  for (float v : pm.cells()) {
    if (!(v >= 0.0f && v <= 1.0f)) throw ParameterError("probability outside [0, 1]");
  }
}

/// Calls `fill(row, col_begin, col_end)` for every run of cells whose centre
/// (col + 0.5, row + 0.5) is inside the ring under the non-zero rule. Runs
/// are half-open and clipped to the grid.
template <typename Fill>
void scan_ring(std::span<const Point> ring, int height, int width, Fill&& fill) {
  const std::size_t n = ring.size();
  if (n < 3) return;
  double y_min = ring[0].y, y_max = ring[0].y;
  for (const Point& p : ring) {
    y_min = std::min(y_min, p.y);
    y_max = std::max(y_max, p.y);
  }
  const int row_begin = std::max(0, static_cast<int>(std::ceil(y_min - 0.5)));
  const int row_end = std::min(height, static_cast<int>(std::ceil(y_max - 0.5)));
  struct Crossing {
    double x;
    int dir;
  };
  std::vector<Crossing> xs;
  for (int row = row_begin; row < row_end; ++row) {
    const double y = row + 0.5;
    xs.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = ring[i];
      const Point b = ring[(i + 1) % n];
      int dir = 0;
      if (a.y <= y && y < b.y) dir = 1;
      else if (b.y <= y && y < a.y) dir = -1;
      if (dir == 0) continue;
      xs.push_back({a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y), dir});
    }
    std::sort(xs.begin(), xs.end(), [](const Crossing& l, const Crossing& r) { return l.x < r.x; });
    int wind = 0;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      wind += xs[k].dir;
      if (wind == 0) continue;
      const double lo = std::ceil(xs[k].x - 0.5);
      const double hi = std::ceil(xs[k + 1].x - 0.5);
      const int c0 = static_cast<int>(std::clamp(lo, 0.0, static_cast<double>(width)));
      const int c1 = static_cast<int>(std::clamp(hi, 0.0, static_cast<double>(width)));
      if (c0 < c1) fill(row, c0, c1);
    }
  }
}

/// Sets every cell whose centre lies inside `p` to `value`.
template <typename T, typename Tag>
void fill_polygon(Raster<T, Tag>& raster, const Polygon& p, T value) {
  scan_ring(p.vertices(), raster.height(), raster.width(), [&](int row, int c0, int c1) {
    auto cells = raster.cells();
    const std::size_t base = static_cast<std::size_t>(row) * raster.width();
    std::fill(cells.begin() + base + c0, cells.begin() + base + c1, value);
  });
}

/// Pixel-centre rasterization: cell (i, j) is 1 iff (j + 0.5, i + 0.5) is
/// inside `p`.
inline BinaryMask rasterize(const Polygon& p, int height, int width) {
  BinaryMask m(height, width, 0);
  fill_polygon(m, p, std::uint8_t{1});
  return m;
}

/// Union rasterization of several polygons.
inline BinaryMask rasterize(std::span<const Polygon> polys, int height, int width) {
  BinaryMask m(height, width, 0);
  for (const Polygon& p : polys) fill_polygon(m, p, std::uint8_t{1});
  return m;
}

/// Three-valued combination: ignore absorbs, positive dominates negative.
constexpr Tri ors(Tri a, Tri b) {
  if (a == Tri::ign || b == Tri::ign) return Tri::ign;
  if (a == Tri::pos || b == Tri::pos) return Tri::pos;
  return Tri::neg;
}

inline TriStateMask ors(const TriStateMask& a, const TriStateMask& b) {
  require_same_shape(a.height(), a.width(), b.height(), b.width(), "ors");
  TriStateMask out(a.height(), a.width());
  auto o = out.cells();
  auto ac = a.cells();
  auto bc = b.cells();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = ors(ac[i], bc[i]);
  return out;
}

/// Per-cell complement.
inline BinaryMask reverse(const BinaryMask& a) {
  BinaryMask out(a.height(), a.width());
  auto o = out.cells();
  auto in = a.cells();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = in[i] ? 0 : 1;
  return out;
}

/// Positive cells become ignored; the rest stay negative.
inline TriStateMask ignore_positive(const BinaryMask& a) {
  TriStateMask out(a.height(), a.width());
  auto o = out.cells();
  auto in = a.cells();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = in[i] ? Tri::ign : Tri::neg;
  return out;
}

/// 1 -> positive, 0 -> negative.
inline TriStateMask to_tristate(const BinaryMask& a) {
  TriStateMask out(a.height(), a.width());
  auto o = out.cells();
  auto in = a.cells();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = in[i] ? Tri::pos : Tri::neg;
  return out;
}

template <typename T, typename Tag>
std::size_t count(const Raster<T, Tag>& r, T value) {
  return static_cast<std::size_t>(std::count(r.cells().begin(), r.cells().end(), value));
}

}  // namespace ztd
