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
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ztd/detail/arrangement.hpp"
#include "ztd/errors.hpp"
#include "ztd/geometry.hpp"

namespace ztd {

enum class JoinType { miter, round, square };

struct OffsetOptions {
  JoinType join = JoinType::miter;
  /// Miter joins longer than miter_limit * distance fall back to square joins.
  double miter_limit = 2.0;
  /// Upper bound on the sagitta of round-join chords, in pixels. The effective
  /// bound is min(arc_tolerance, 0.01 * distance).
  double arc_tolerance = 0.25;
  /// Result pieces with smaller area are discarded.
  double min_area = 1.0;
};

namespace detail {

// Raw offset curve of a counter-clockwise ring. delta > 0 moves outward.
// Where neighbouring offset edges overlap and cannot be trimmed, the path is
// routed back through the original vertex; the loops this creates are
// removed when the curve is resolved.
inline std::vector<Point> raw_offset(const std::vector<Point>& ring, double delta,
                                     const OffsetOptions& opt) {
  const std::size_t n = ring.size();
  std::vector<Point> dir(n);
  std::vector<Point> normal(n);  // outward unit normal of edge i -> i+1
  for (std::size_t i = 0; i < n; ++i) {
    const Point e = ring[(i + 1) % n] - ring[i];
    const double len = norm(e);
    dir[i] = {e.x / len, e.y / len};
    normal[i] = {dir[i].y, -dir[i].x};
  }
  const double dist = std::abs(delta);
  const double tol = std::min(opt.arc_tolerance, 0.01 * dist);
  const double step = 2.0 * std::acos(std::clamp(1.0 - tol / dist, -1.0, 1.0));

  // When growing, a reflex corner whose two offset edges cross within both
  // edges is joined at the crossing; the loop it replaces lies inside the
  // result. `trim[i]` is the length each edge at vertex i gives up.
  std::vector<double> trim(n, 0.0);
  std::vector<double> edge_len(n);
  for (std::size_t i = 0; i < n; ++i) edge_len[i] = norm(ring[(i + 1) % n] - ring[i]);
  if (delta > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t prev = (i + n - 1) % n;
      const double sin_a = cross(dir[prev], dir[i]);
      const double cos_a = dot(dir[prev], dir[i]);
      if (sin_a < -1e-12 && cos_a > -0.99) trim[i] = delta * -sin_a / (1.0 + cos_a);
    }
  }
  const auto trimmed_join = [&](std::size_t i) {
    const std::size_t prev = (i + n - 1) % n;
    return trim[i] > 0.0 && trim[prev] + trim[i] <= edge_len[prev] &&
           trim[i] + trim[(i + 1) % n] <= edge_len[i];
  };

  std::vector<Point> out;
  out.reserve(n * 4);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = (i + n - 1) % n;
    const Point v = ring[i];
    const Point np = normal[prev];
    const Point nc = normal[i];
    const Point p1 = v + np * delta;
    const Point p2 = v + nc * delta;
    const double sin_a = cross(dir[prev], dir[i]);
    const double cos_a = dot(dir[prev], dir[i]);

    if (std::abs(sin_a) < 1e-12 && cos_a > 0.0) {
      out.push_back(p1);
      continue;
    }
    if (sin_a * delta <= 0.0) {
      if (trimmed_join(i)) {
        out.push_back(v + (np + nc) * (delta / (1.0 + cos_a)));
        continue;
      }
      out.push_back(p1);
      out.push_back(v);
      out.push_back(p2);
      continue;
    }
    JoinType join = opt.join;
    if (join == JoinType::miter && std::sqrt(2.0 / (1.0 + cos_a)) > opt.miter_limit) {
      join = JoinType::square;
    }
    switch (join) {
      case JoinType::miter: {
        out.push_back(v + (np + nc) * (delta / (1.0 + cos_a)));
        break;
      }
      case JoinType::square: {
        // Cut the corner with a line perpendicular to the bisector at
        // distance |delta| from the vertex.
        Point bis = np + nc;
        const double bl = norm(bis);
        bis = {bis.x / bl, bis.y / bl};
        const double s = delta > 0.0 ? 1.0 : -1.0;
        const Point outward = bis * s;
        const double t1 = dist * (1.0 - dot(np, bis)) / dot(dir[prev], outward);
        const double t2 = dist * (1.0 - dot(nc, bis)) / dot(dir[i] * -1.0, outward);
        out.push_back(p1 + dir[prev] * t1);
        out.push_back(p2 - dir[i] * t2);
        break;
      }
      case JoinType::round: {
        const double sweep = std::atan2(sin_a, cos_a);
        const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(sweep) / step)));
        const double da = sweep / steps;
        const Point r0 = np * delta;
        out.push_back(p1);
        for (int k = 1; k < steps; ++k) {
          const double ang = da * k;
          const double c = std::cos(ang);
          const double sn = std::sin(ang);
          out.push_back(v + Point{r0.x * c - r0.y * sn, r0.x * sn + r0.y * c});
        }
        out.push_back(p2);
        break;
      }
    }
  }
  return out;
}

struct ResolvedRegion {
  std::vector<std::vector<Point>> outers;  // counter-clockwise
  std::vector<std::vector<Point>> holes;   // clockwise
};

// Positive-winding region of a set of closed paths (non-zero rule for
// counter-clockwise input).
inline ResolvedRegion resolve_positive(const std::vector<std::vector<Point>>& paths,
                                       double min_area) {
  ResolvedRegion region;
  if (paths.size() == 1) {
    // A simple loop bounds its own positive region, or none when reversed.
    std::vector<Point> ring = remove_collinear(paths[0]);
    if (ring.size() >= 3 && is_simple_ring(ring)) {
      if (signed_area(ring) >= min_area) region.outers.push_back(std::move(ring));
      return region;
    }
  }
  Arrangement arr;
  for (const auto& p : paths) arr.add_path(p, 0);
  const auto edges = arr.boundary([](const Windings& w) { return w[0] > 0; });
  for (auto& ring : link_rings(edges)) {
    ring = remove_collinear(std::move(ring));
    if (ring.size() < 3) continue;
    const double area = signed_area(ring);
    if (std::abs(area) < min_area) continue;
    if (!is_simple_ring(ring)) continue;
    (area > 0.0 ? region.outers : region.holes).push_back(std::move(ring));
  }
  return region;
}

}  // namespace detail

/// Inward offset by `distance` pixels. Narrow parts may split the polygon
/// into several pieces, or it may vanish entirely.
inline std::vector<Polygon> shrink_polygon(const Polygon& p, double distance,
                                           const OffsetOptions& opt = {}) {
  if (!(distance >= 0.0) || !std::isfinite(distance)) {
    throw ParameterError("shrink distance must be finite and non-negative");
  }
  if (distance == 0.0) return {p};
  const auto raw = detail::raw_offset(p.vertices(), -distance, opt);
  auto region = detail::resolve_positive({raw}, opt.min_area);
  std::vector<Polygon> pieces;
  pieces.reserve(region.outers.size());
  for (auto& ring : region.outers) pieces.emplace_back(std::move(ring));
  return pieces;
}

inline OffsetOptions round_join_options() {
  OffsetOptions opt;
  opt.join = JoinType::round;
  return opt;
}

/// Outward offset by `distance` pixels. The outer boundary of the grown
/// region is returned; holes closed off by the growth are filled.
inline Polygon expand_polygon(const Polygon& p, double distance,
                              const OffsetOptions& opt = round_join_options()) {
  if (!(distance >= 0.0) || !std::isfinite(distance)) {
    throw ParameterError("expand distance must be finite and non-negative");
  }
  if (distance == 0.0) return p;
  const auto raw = detail::raw_offset(p.vertices(), distance, opt);
  auto region = detail::resolve_positive({raw}, opt.min_area);
  if (region.outers.empty()) {
    throw GeometryError("outward offset produced no region");
  }
  auto largest = std::max_element(region.outers.begin(), region.outers.end(),
                                  [](const auto& a, const auto& b) {
                                    return signed_area(a) < signed_area(b);
                                  });
  return Polygon(std::move(*largest));
}

}  // namespace ztd
