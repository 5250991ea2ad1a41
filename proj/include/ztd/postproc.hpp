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

// Object-wise contour extension: threshold the predicted shrink-mask map,
// group cells into components, trace each component's outer boundary and
// grow it back to a text contour.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ztd/errors.hpp"
#include "ztd/geometry.hpp"
#include "ztd/mask.hpp"
#include "ztd/offset.hpp"
#include "ztd/scene.hpp"

namespace ztd {

struct PostprocConfig {
  double bin_threshold = 0.5;
  double min_area = 16.0;  // cells at map scale
  double min_score = 0.55;
  double extend_ratio = 1.5;
  int connectivity = 8;
  double simplify_tolerance = 1.0;  // cells
  JoinType join = JoinType::round;

  void validate() const {
    if (!(bin_threshold > 0.0 && bin_threshold < 1.0)) {
      throw ParameterError("bin_threshold must lie in (0, 1)");
    }
    if (!(extend_ratio > 0.0) || !std::isfinite(extend_ratio)) {
      throw ParameterError("extend_ratio must be positive");
    }
    if (connectivity != 4 && connectivity != 8) throw ParameterError("connectivity must be 4 or 8");
    if (!(min_area >= 0.0)) throw ParameterError("min_area must be non-negative");
    if (!(min_score >= 0.0 && min_score <= 1.0)) throw ParameterError("min_score must lie in [0, 1]");
    if (!(simplify_tolerance >= 0.0)) throw ParameterError("simplify_tolerance must be non-negative");
  }
};

struct Cell {
  int row = 0;
  int col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// A connected set of positive cells in raster order, with its bounding box.
struct Component {
  std::vector<Cell> cells;
  int min_row = 0;
  int min_col = 0;
  int max_row = 0;
  int max_col = 0;
};

/// Cell is 1 iff its probability is strictly greater than `threshold`.
inline BinaryMask binarize(const ProbabilityMap& pm, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ParameterError("threshold must lie in (0, 1)");
  BinaryMask out(pm.height(), pm.width(), 0);
  auto o = out.cells();
  const auto in = pm.cells();
  for (std::size_t i = 0; i < in.size(); ++i) o[i] = in[i] > threshold ? 1 : 0;
  return out;
}

namespace detail {

inline void check_connectivity(int connectivity) {
  if (connectivity != 4 && connectivity != 8) throw ParameterError("connectivity must be 4 or 8");
}

/// Horizontal run of selected cells [begin, end) in one row.
struct Run {
  int row = 0;
  int begin = 0;
  int end = 0;
  std::int32_t id = 0;  // component id, 1-based
};

/// Run-length component labelling. Runs are stored in raster order and
/// components are numbered 1..count in raster order of their first cell.
struct RunLabels {
  std::vector<Run> runs;
  std::vector<std::size_t> row_start;  // runs of row r: [row_start[r], row_start[r + 1])
  std::int32_t count = 0;

  /// Component id of cell (r, c), or 0 for background.
  std::int32_t id_at(int r, int c) const {
    if (r < 0 || r + 1 >= static_cast<int>(row_start.size())) return 0;
    const auto first = runs.begin() + static_cast<std::ptrdiff_t>(row_start[r]);
    const auto last = runs.begin() + static_cast<std::ptrdiff_t>(row_start[r + 1]);
    const auto it = std::upper_bound(first, last, c, [](int col, const Run& run) {
      return col < run.begin;
    });
    if (it == first) return 0;
    const Run& run = *(it - 1);
    return c < run.end ? run.id : 0;
  }
};

template <typename On>
RunLabels label_runs(int height, int width, int connectivity, On&& on) {
  check_connectivity(connectivity);
  RunLabels out;
  out.row_start.assign(static_cast<std::size_t>(height) + 1, 0);
  std::vector<std::size_t> parent;
  const auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  // Runs in the previous row touch a run when their column spans overlap,
  // widened by one column for diagonal contact.
  const int reach = connectivity == 8 ? 1 : 0;
  for (int r = 0; r < height; ++r) {
    out.row_start[r] = out.runs.size();
    const std::size_t base = static_cast<std::size_t>(r) * width;
    for (int c = 0; c < width;) {
      if (!on(base + c)) {
        ++c;
        continue;
      }
      const int begin = c;
      while (c < width && on(base + c)) ++c;
      out.runs.push_back({r, begin, c, 0});
      parent.push_back(parent.size());
    }
    if (r == 0) continue;
    std::size_t i = out.row_start[r - 1];
    const std::size_t prev_end = out.row_start[r];
    for (std::size_t j = prev_end; j < out.runs.size(); ++j) {
      const Run& cur = out.runs[j];
      while (i < prev_end && out.runs[i].end + reach <= cur.begin) ++i;
      for (std::size_t k = i; k < prev_end && out.runs[k].begin < cur.end + reach; ++k) {
        const std::size_t a = find(k), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  out.row_start[height] = out.runs.size();
  std::vector<std::int32_t> root_id(out.runs.size(), 0);
  for (std::size_t j = 0; j < out.runs.size(); ++j) {
    std::int32_t& id = root_id[find(j)];
    if (id == 0) id = ++out.count;
    out.runs[j].id = id;
  }
  return out;
}

inline constexpr double kPinchChamfer = 0.01;

/// Crack-following walk around the outer boundary of the cells selected by
/// `filled(row, col)`, starting at the top-left corner of (start_row,
/// start_col), which must be the component's first cell in raster order.
/// Vertices sit on cell corners; only turning points are emitted. Where two
/// component cells touch diagonally the walk joins them (8-connectivity) or
/// passes between them (4-connectivity), and the corner is cut by a tiny
/// chamfer on every visit so the ring stays simple.
template <typename Filled>
std::vector<Point> trace_outer(int start_row, int start_col, int connectivity, Filled&& filled) {
  // Directions in image coordinates (y down): the component lies on the
  // clockwise side of travel.
  static constexpr int kDx[4] = {1, 0, -1, 0};
  static constexpr int kDy[4] = {0, 1, 0, -1};
  const auto cell_at = [&](int x, int y, int sx, int sy) {
    // Cell whose centre is at vertex + (sx, sy) / 2 with sx, sy in {-1, 1}.
    return filled(sy > 0 ? y : y - 1, sx > 0 ? x : x - 1);
  };
  std::vector<Point> ring{{static_cast<double>(start_col), static_cast<double>(start_row)}};
  int x = start_col, y = start_row, dir = 0;
  for (;;) {
    x += kDx[dir];
    y += kDy[dir];
    if (x == start_col && y == start_row) break;
    const int dx = kDx[dir], dy = kDy[dir];
    // Clockwise normal on screen.
    const int rx = -dy, ry = dx;
    const bool ahead_right = cell_at(x, y, dx + rx, dy + ry);
    const bool ahead_left = cell_at(x, y, dx - rx, dy - ry);
    int next = dir;
    bool pinch = false;
    if (!ahead_right && !ahead_left) {
      next = (dir + 1) % 4;
    } else if (ahead_left) {
      pinch = !ahead_right;
      next = (ahead_right || connectivity == 8) ? (dir + 3) % 4 : (dir + 1) % 4;
    }
    if (next == dir) continue;
    const Point p{static_cast<double>(x), static_cast<double>(y)};
    if (pinch) {
      ring.push_back({p.x - kPinchChamfer * dx, p.y - kPinchChamfer * dy});
      ring.push_back({p.x + kPinchChamfer * kDx[next], p.y + kPinchChamfer * kDy[next]});
    } else {
      ring.push_back(p);
    }
    dir = next;
  }
  return ring;
}

inline void simplify_chain(const std::vector<Point>& pts, std::size_t lo, std::size_t hi,
                           double tol, std::vector<char>& keep) {
  if (hi <= lo + 1) return;
  double best = -1.0;
  std::size_t at = lo;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    const double d = point_segment_distance(pts[i], pts[lo], pts[hi % pts.size()]);
    if (d > best) {
      best = d;
      at = i;
    }
  }
  if (best > tol) {
    keep[at] = 1;
    simplify_chain(pts, lo, at, tol, keep);
    simplify_chain(pts, at, hi, tol, keep);
  }
}

/// Anchor ring for simplification: every cell edge run contributes the
/// midpoints of its first and last unit edge, except at corners joining two
/// runs of at least two edges, which are kept exactly. Rasterized straight
/// edges always contain unit steps, so their staircases become nearly
/// collinear while true corners survive.
inline std::vector<Point> contour_anchors(const std::vector<Point>& ring) {
  const std::size_t n = ring.size();
  const auto run_length = [&](std::size_t i) {
    const Point e = ring[(i + 1) % n] - ring[i];
    return std::abs(e.x) + std::abs(e.y);
  };
  std::vector<char> corner(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    corner[i] = run_length((i + n - 1) % n) >= 2.0 && run_length(i) >= 2.0;
  }
  std::vector<Point> out;
  out.reserve(n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i];
    const Point b = ring[(i + 1) % n];
    const double len = run_length(i);
    if (corner[i]) out.push_back(a);
    if (len < 1.0) {
      out.push_back((a + b) * 0.5);
      continue;
    }
    const Point unit = (b - a) * (1.0 / len);
    if (!corner[i]) out.push_back(a + unit * 0.5);
    if (!corner[(i + 1) % n] && len > 1.0) out.push_back(b - unit * 0.5);
  }
  return out;
}

}  // namespace detail

/// Partition of the positive cells into maximal connected sets, ordered by
/// the raster position of each set's first cell.
inline std::vector<Component> connected_components(const BinaryMask& m, int connectivity = 8) {
  const auto cells = m.cells();
  const auto labels = detail::label_runs(m.height(), m.width(), connectivity,
                                         [&](std::size_t i) { return cells[i] != 0; });
  std::vector<Component> out(static_cast<std::size_t>(labels.count));
  std::vector<char> seen(out.size(), 0);
  for (const detail::Run& run : labels.runs) {
    Component& comp = out[static_cast<std::size_t>(run.id - 1)];
    if (!seen[run.id - 1]) {
      seen[run.id - 1] = 1;
      comp = {{}, run.row, run.begin, run.row, run.end - 1};
    }
    for (int c = run.begin; c < run.end; ++c) comp.cells.push_back({run.row, c});
    comp.min_col = std::min(comp.min_col, run.begin);
    comp.max_col = std::max(comp.max_col, run.end - 1);
    comp.max_row = run.row;
  }
  return out;
}

/// Outer boundary of a component as a polygon with vertices on cell corners
/// (x = column, y = row). Holes are not traced.
inline Polygon trace_contour(const Component& comp, int connectivity = 8) {
  detail::check_connectivity(connectivity);
  if (comp.cells.empty()) throw ParameterError("trace_contour: empty component");
  const int h = comp.max_row - comp.min_row + 1;
  const int w = comp.max_col - comp.min_col + 1;
  std::vector<std::uint8_t> local(static_cast<std::size_t>(h) * w, 0);
  for (const Cell& c : comp.cells) {
    local[static_cast<std::size_t>(c.row - comp.min_row) * w + (c.col - comp.min_col)] = 1;
  }
  const auto filled = [&](int r, int c) {
    r -= comp.min_row;
    c -= comp.min_col;
    return r >= 0 && r < h && c >= 0 && c < w && local[static_cast<std::size_t>(r) * w + c] != 0;
  };
  return Polygon(detail::trace_outer(comp.cells.front().row, comp.cells.front().col, connectivity,
                                     filled));
}

/// Douglas-Peucker simplification of a closed ring, anchored at vertex 0
/// and the vertex farthest from it.
inline std::vector<Point> simplify_ring(const std::vector<Point>& ring, double tolerance) {
  const std::size_t n = ring.size();
  if (n <= 4 || tolerance <= 0.0) return ring;
  std::size_t far = 0;
  double best = -1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = norm(ring[i] - ring[0]);
    if (d > best) {
      best = d;
      far = i;
    }
  }
  std::vector<char> keep(n, 0);
  keep[0] = keep[far] = 1;
  detail::simplify_chain(ring, 0, far, tolerance, keep);
  detail::simplify_chain(ring, far, n, tolerance, keep);
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.push_back(ring[i]);
  }
  return out;
}

/// Text contours recovered from a shrink-mask probability map. Each surviving
/// component's outer contour is simplified to a polygon C, grown by
/// area(C) * extend_ratio / perimeter(C) and scaled by `output_scale` into
/// image coordinates. The score is the mean probability over the component.
inline std::vector<Detection> detect(const ProbabilityMap& pm, const PostprocConfig& cfg = {},
                                     double output_scale = 1.0) {
  cfg.validate();
  if (!(output_scale > 0.0) || !std::isfinite(output_scale)) {
    throw ParameterError("output_scale must be positive");
  }
  const auto probs = pm.cells();
  const auto labels = detail::label_runs(pm.height(), pm.width(), cfg.connectivity,
                                         [&](std::size_t i) { return probs[i] > cfg.bin_threshold; });
  const auto count = static_cast<std::size_t>(labels.count);
  std::vector<std::size_t> cells(count, 0);
  std::vector<double> sums(count, 0.0);
  std::vector<const detail::Run*> first(count, nullptr);
  const int w = pm.width();
  for (const detail::Run& run : labels.runs) {
    const auto k = static_cast<std::size_t>(run.id - 1);
    if (first[k] == nullptr) first[k] = &run;
    cells[k] += static_cast<std::size_t>(run.end - run.begin);
    const std::size_t base = static_cast<std::size_t>(run.row) * w;
    for (int c = run.begin; c < run.end; ++c) sums[k] += probs[base + c];
  }

  std::vector<Detection> out;
  for (std::size_t k = 0; k < count; ++k) {
    if (static_cast<double>(cells[k]) < cfg.min_area) continue;
    const double score = sums[k] / static_cast<double>(cells[k]);
    if (score < cfg.min_score) continue;

    const auto id = static_cast<std::int32_t>(k + 1);
    const auto filled = [&](int r, int c) { return labels.id_at(r, c) == id; };
    std::vector<Point> ring =
        detail::trace_outer(first[k]->row, first[k]->begin, cfg.connectivity, filled);
    std::vector<Point> simple =
        simplify_ring(detail::contour_anchors(ring), cfg.simplify_tolerance);
    Polygon contour = [&] {
      if (simple.size() >= 3 && signed_area(simple) != 0.0 && is_simple_ring(simple)) {
        return Polygon(std::move(simple));
      }
      return Polygon(std::move(ring));
    }();
    const double distance =
        polygon_area(contour) * cfg.extend_ratio / polygon_perimeter(contour);
    OffsetOptions grow;
    grow.join = cfg.join;
    Polygon grown = expand_polygon(contour, distance, grow);
    if (output_scale != 1.0) grown = grown.scaled(output_scale);
    out.push_back({std::move(grown), std::clamp(score, 0.0, 1.0)});
  }
  return out;
}

}  // namespace ztd
