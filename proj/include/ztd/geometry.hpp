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
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ztd/errors.hpp"

namespace ztd {

/// A planar point in pixel coordinates (x to the right, y down the rows).
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point&, const Point&) = default;
  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Point operator*(double s, Point a) { return {a.x * s, a.y * s}; }
};

constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }

/// Shoelace signed area; positive for counter-clockwise vertex order.
inline double signed_area(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

namespace detail {

inline int orientation(Point a, Point b, Point c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

// c is known to be collinear with a-b.
inline bool within_box(Point a, Point b, Point c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
}

/// Closed-segment intersection test (touching counts).
inline bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && within_box(p1, p2, q1)) return true;
  if (o2 == 0 && within_box(p1, p2, q2)) return true;
  if (o3 == 0 && within_box(q1, q2, p1)) return true;
  if (o4 == 0 && within_box(q1, q2, p2)) return true;
  return false;
}

}  // namespace detail

/// True when the closed ring has no repeated consecutive vertices, no
/// backtracking spikes and no intersections between non-adjacent edges.
inline bool is_simple_ring(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i];
    const Point b = ring[(i + 1) % n];
    const Point c = ring[(i + 2) % n];
    if (a == b) return false;
    if (cross(b - a, c - b) == 0.0 && dot(b - a, c - b) < 0.0) return false;
  }
  if (n == 3) return true;
  // Bounding boxes prune most pairs; contours here are at most a few hundred
  // vertices after simplification.
  struct Box {
    double x0, y0, x1, y1;
  };
  std::vector<Box> boxes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i];
    const Point b = ring[(i + 1) % n];
    boxes[i] = {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
      const Box& bi = boxes[i];
      const Box& bj = boxes[j];
      if (bi.x1 < bj.x0 || bj.x1 < bi.x0 || bi.y1 < bj.y0 || bj.y1 < bi.y0) continue;
      if (detail::segments_intersect(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

/// A simple polygon with at least three vertices and non-zero area, stored
/// in counter-clockwise order (positive shoelace area).
class Polygon {
 public:
  explicit Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) {
      throw GeometryError("polygon needs at least 3 vertices, got " +
                          std::to_string(vertices_.size()));
    }
    for (const Point& p : vertices_) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw GeometryError("polygon vertex is not finite");
      }
    }
    const double area = signed_area(vertices_);
    if (area == 0.0) throw GeometryError("polygon has zero area");
    if (!is_simple_ring(vertices_)) throw GeometryError("polygon is not simple");
    if (area < 0.0) std::reverse(vertices_.begin(), vertices_.end());
  }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }

  /// Uniform scaling about the origin; `factor` must be positive.
  Polygon scaled(double factor) const {
    if (!(factor > 0.0)) throw ParameterError("scale factor must be positive");
    std::vector<Point> out;
    out.reserve(vertices_.size());
    for (const Point& p : vertices_) out.push_back(p * factor);
    return Polygon(std::move(out));
  }

  Polygon translated(double dx, double dy) const {
    std::vector<Point> out;
    out.reserve(vertices_.size());
    for (const Point& p : vertices_) out.push_back({p.x + dx, p.y + dy});
    return Polygon(std::move(out));
  }

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  std::vector<Point> vertices_;
};

inline double polygon_area(const Polygon& p) { return std::abs(signed_area(p.vertices())); }

inline double polygon_perimeter(const Polygon& p) {
  const auto& v = p.vertices();
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) total += norm(v[(i + 1) % v.size()] - v[i]);
  return total;
}

/// Offset distance for a shrink ratio r: A * (1 - r^2) / L.
inline double offset_distance(const Polygon& p, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw ParameterError("shrink ratio must lie in (0, 1], got " + std::to_string(ratio));
  }
  return polygon_area(p) * (1.0 - ratio * ratio) / polygon_perimeter(p);
}

/// Non-zero winding number of `ring` around `q`; boundary points follow the
/// half-open crossing rule.
inline int winding_number(std::span<const Point> ring, Point q) {
  int wn = 0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i];
    const Point b = ring[(i + 1) % n];
    if (a.y <= q.y) {
      if (b.y > q.y && cross(b - a, q - a) > 0.0) ++wn;
    } else if (b.y <= q.y && cross(b - a, q - a) < 0.0) {
      --wn;
    }
  }
  return wn;
}

inline bool contains(const Polygon& p, Point q) { return winding_number(p.vertices(), q) != 0; }

/// Minimum distance from `q` to the segment a-b.
inline double point_segment_distance(Point q, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(q - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(q - (a + ab * t));
}

/// Minimum distance between the boundaries of two polygons (0 if they cross).
inline double boundary_distance(const Polygon& a, const Polygon& b) {
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < va.size(); ++i) {
    const Point a0 = va[i];
    const Point a1 = va[(i + 1) % va.size()];
    for (std::size_t j = 0; j < vb.size(); ++j) {
      const Point b0 = vb[j];
      const Point b1 = vb[(j + 1) % vb.size()];
      if (detail::segments_intersect(a0, a1, b0, b1)) return 0.0;
      best = std::min({best, point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                       point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
    }
  }
  return best;
}

/// Axis-aligned rectangle [x0,x1] x [y0,y1] as a polygon.
inline Polygon make_rectangle(double x0, double y0, double x1, double y1) {
  return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

}  // namespace ztd
