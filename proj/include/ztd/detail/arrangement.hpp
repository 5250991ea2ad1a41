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

// Planar arrangement of closed paths with per-operand winding numbers.
//
// Every input edge is split at all intersections, coincident pieces are
// merged into one undirected edge carrying a net multiplicity per operand,
// and the winding numbers on both sides of each merged edge are found with an
// axis-aligned ray cast into its left side. An edge lies on the boundary of a
// region when a predicate over the winding numbers differs between its two
// sides.
// This resolves self-intersecting offset curves (non-zero rule) and gives
// exact-up-to-rounding intersection areas for IoU.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ztd/geometry.hpp"

namespace ztd::detail {

inline constexpr int kMaxOperands = 2;
using Windings = std::array<int, kMaxOperands>;

struct DirectedEdge {
  Point from;
  Point to;
};

class Arrangement {
 public:
  /// Adds a closed path belonging to operand `operand` (0 or 1).
  void add_path(std::span<const Point> path, int operand) {
    if (path.size() < 2) return;
    for (const Point& p : path) extend_bounds(p);
    pending_.push_back({std::vector<Point>(path.begin(), path.end()), operand});
  }

  /// Directed boundary edges of {w : inside(w)}, region on the left.
  template <typename Inside>
  std::vector<DirectedEdge> boundary(Inside&& inside) {
    build();
    std::vector<DirectedEdge> out;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      const Windings left = left_windings(g);
      Windings right = left;
      for (int k = 0; k < kMaxOperands; ++k) right[k] -= groups_[g].mult[k];
      const bool in_left = inside(left);
      const bool in_right = inside(right);
      if (in_left == in_right) continue;
      const Point a = vertices_[groups_[g].lo];
      const Point b = vertices_[groups_[g].hi];
      out.push_back(in_left ? DirectedEdge{a, b} : DirectedEdge{b, a});
    }
    return out;
  }

 private:
  struct PendingPath {
    std::vector<Point> points;
    int operand;
  };
  struct Segment {
    std::uint32_t a, b;
    int operand;
  };
  struct Group {
    std::uint32_t lo, hi;
    Windings mult{};
  };

  void extend_bounds(Point p) {
    min_x_ = std::min(min_x_, p.x);
    min_y_ = std::min(min_y_, p.y);
    max_x_ = std::max(max_x_, p.x);
    max_y_ = std::max(max_y_, p.y);
  }

  static std::uint64_t cell_key(std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint64_t>(cy & 0xffffffff);
  }

  // Returns the id of an existing vertex within eps_, or inserts `p`.
  std::uint32_t vertex_id(Point p) {
    const auto cx = static_cast<std::int64_t>(std::floor(p.x / cell_));
    const auto cy = static_cast<std::int64_t>(std::floor(p.y / cell_));
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = grid_.find(cell_key(cx + dx, cy + dy));
        if (it == grid_.end()) continue;
        for (std::uint32_t id : it->second) {
          const Point q = vertices_[id];
          if (std::abs(q.x - p.x) <= eps_ && std::abs(q.y - p.y) <= eps_) return id;
        }
      }
    }
    const auto id = static_cast<std::uint32_t>(vertices_.size());
    vertices_.push_back(p);
    grid_[cell_key(cx, cy)].push_back(id);
    return id;
  }

  void build() {
    if (built_) return;
    built_ = true;
    const double extent = std::max({max_x_ - min_x_, max_y_ - min_y_, std::abs(max_x_),
                                    std::abs(max_y_), std::abs(min_x_), std::abs(min_y_), 1.0});
    eps_ = 1e-9 * extent;
    cell_ = 4.0 * eps_;

    std::vector<Segment> segments;
    for (const PendingPath& path : pending_) {
      const std::size_t n = path.points.size();
      std::vector<std::uint32_t> ids;
      ids.reserve(n);
      for (const Point& p : path.points) ids.push_back(vertex_id(p));
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t a = ids[i];
        const std::uint32_t b = ids[(i + 1) % n];
        if (a != b) segments.push_back({a, b, path.operand});
      }
    }
    pending_.clear();

    // Split parameters per segment: (t along segment, vertex id).
    std::vector<std::vector<std::pair<double, std::uint32_t>>> splits(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i) {
      splits[i].push_back({0.0, segments[i].a});
      splits[i].push_back({1.0, segments[i].b});
    }
    auto try_split_at_vertex = [&](std::size_t s, std::uint32_t vid) {
      const Segment& seg = segments[s];
      if (vid == seg.a || vid == seg.b) return;
      const Point a = vertices_[seg.a];
      const Point b = vertices_[seg.b];
      const Point p = vertices_[vid];
      const Point ab = b - a;
      const double len2 = dot(ab, ab);
      const double t = dot(p - a, ab) / len2;
      if (t <= 0.0 || t >= 1.0) return;
      const double dist = std::abs(cross(ab, p - a)) / std::sqrt(len2);
      if (dist <= eps_) splits[s].push_back({t, vid});
    };

    struct Box {
      double x0, y0, x1, y1;
    };
    std::vector<Box> boxes(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i) {
      const Point a = vertices_[segments[i].a];
      const Point b = vertices_[segments[i].b];
      boxes[i] = {std::min(a.x, b.x) - eps_, std::min(a.y, b.y) - eps_,
                  std::max(a.x, b.x) + eps_, std::max(a.y, b.y) + eps_};
    }
    std::vector<std::size_t> order(segments.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t l, std::size_t r) { return boxes[l].x0 < boxes[r].x0; });

    for (std::size_t oi = 0; oi < order.size(); ++oi) {
      const std::size_t i = order[oi];
      for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
        const std::size_t j = order[oj];
        if (boxes[j].x0 > boxes[i].x1) break;
        if (boxes[j].y0 > boxes[i].y1 || boxes[i].y0 > boxes[j].y1) continue;
        const Segment& si = segments[i];
        const Segment& sj = segments[j];
        try_split_at_vertex(i, sj.a);
        try_split_at_vertex(i, sj.b);
        try_split_at_vertex(j, si.a);
        try_split_at_vertex(j, si.b);

        const Point p = vertices_[si.a];
        const Point r = vertices_[si.b] - p;
        const Point q = vertices_[sj.a];
        const Point s = vertices_[sj.b] - q;
        const double denom = cross(r, s);
        if (std::abs(denom) <= 1e-14 * norm(r) * norm(s)) continue;  // parallel
        const double t = cross(q - p, s) / denom;
        const double u = cross(q - p, r) / denom;
        if (t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0) continue;
        const std::uint32_t vid = vertex_id(p + r * t);
        if (vid != si.a && vid != si.b) splits[i].push_back({t, vid});
        if (vid != sj.a && vid != sj.b) splits[j].push_back({u, vid});
      }
    }

    std::unordered_map<std::uint64_t, std::size_t> group_index;
    for (std::size_t s = 0; s < segments.size(); ++s) {
      auto& sp = splits[s];
      std::sort(sp.begin(), sp.end());
      for (std::size_t k = 0; k + 1 < sp.size(); ++k) {
        const std::uint32_t a = sp[k].second;
        const std::uint32_t b = sp[k + 1].second;
        if (a == b) continue;
        const std::uint32_t lo = std::min(a, b);
        const std::uint32_t hi = std::max(a, b);
        const std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) | hi;
        auto [it, inserted] = group_index.try_emplace(key, groups_.size());
        if (inserted) groups_.push_back({lo, hi, {}});
        groups_[it->second].mult[segments[s].operand] += (a == lo) ? 1 : -1;
      }
    }
    groups_.erase(std::remove_if(groups_.begin(), groups_.end(),
                                 [](const Group& g) {
                                   return std::all_of(g.mult.begin(), g.mult.end(),
                                                      [](int m) { return m == 0; });
                                 }),
                  groups_.end());
    build_ray_index();
  }

  // Buckets groups by the y range (for horizontal rays) and x range (for
  // vertical rays) they span.
  void build_ray_index() {
    const std::size_t n = groups_.size();
    bin_count_ = std::clamp<std::size_t>(n / 2, 1, 4096);
    bin_x_ = std::max(max_x_ - min_x_, 1e-12) / static_cast<double>(bin_count_);
    bin_y_ = std::max(max_y_ - min_y_, 1e-12) / static_cast<double>(bin_count_);
    x_bins_.assign(bin_count_, {});
    y_bins_.assign(bin_count_, {});
    for (std::size_t h = 0; h < n; ++h) {
      const Point a = vertices_[groups_[h].lo];
      const Point b = vertices_[groups_[h].hi];
      for (std::size_t k = x_bin(std::min(a.x, b.x)); k <= x_bin(std::max(a.x, b.x)); ++k) {
        x_bins_[k].push_back(static_cast<std::uint32_t>(h));
      }
      for (std::size_t k = y_bin(std::min(a.y, b.y)); k <= y_bin(std::max(a.y, b.y)); ++k) {
        y_bins_[k].push_back(static_cast<std::uint32_t>(h));
      }
    }
  }

  std::size_t x_bin(double x) const { return bin_of(x, min_x_, bin_x_); }
  std::size_t y_bin(double y) const { return bin_of(y, min_y_, bin_y_); }
  std::size_t bin_of(double v, double lo, double size) const {
    const double k = std::floor((v - lo) / size);
    return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(bin_count_ - 1)));
  }

  // Winding numbers just left of group g (direction lo -> hi), by casting an
  // axis-aligned ray from its midpoint into its left side against the groups
  // that share the ray's bin.
  Windings left_windings(std::size_t g) const {
    const Point a = vertices_[groups_[g].lo];
    const Point b = vertices_[groups_[g].hi];
    const Point mid = (a + b) * 0.5;
    const Point normal{a.y - b.y, b.x - a.x};
    Point ray;
    const std::vector<std::uint32_t>* candidates;
    if (std::abs(normal.x) >= std::abs(normal.y)) {
      ray = {normal.x > 0.0 ? 1.0 : -1.0, 0.0};
      candidates = &y_bins_[y_bin(mid.y)];
    } else {
      ray = {0.0, normal.y > 0.0 ? 1.0 : -1.0};
      candidates = &x_bins_[x_bin(mid.x)];
    }
    Windings w{};
    for (const std::uint32_t h : *candidates) {
      if (h == g) continue;
      const Point p = vertices_[groups_[h].lo] - mid;
      const Point q = vertices_[groups_[h].hi] - mid;
      const double py = cross(ray, p);
      const double qy = cross(ray, q);
      if ((py > 0.0) == (qy > 0.0)) continue;
      const double px = dot(ray, p);
      const double qx = dot(ray, q);
      const double x = px + (0.0 - py) * (qx - px) / (qy - py);
      if (x <= 0.0) continue;
      const int sign = qy > py ? 1 : -1;
      for (int k = 0; k < kMaxOperands; ++k) w[k] += sign * groups_[h].mult[k];
    }
    return w;
  }

  std::vector<PendingPath> pending_;
  std::vector<Point> vertices_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> grid_;
  std::vector<Group> groups_;
  double min_x_ = 0.0, min_y_ = 0.0, max_x_ = 0.0, max_y_ = 0.0;
  double eps_ = 1e-9;
  double cell_ = 4e-9;
  bool built_ = false;
  std::size_t bin_count_ = 1;
  double bin_x_ = 1.0, bin_y_ = 1.0;
  std::vector<std::vector<std::uint32_t>> x_bins_, y_bins_;
};

/// Signed area enclosed by a set of directed boundary edges (Green's theorem).
inline double boundary_area(std::span<const DirectedEdge> edges) {
  double twice = 0.0;
  for (const DirectedEdge& e : edges) twice += cross(e.from, e.to);
  return 0.5 * twice;
}

/// Links directed boundary edges into closed rings. At vertices with several
/// outgoing edges the sharpest left turn is taken, which keeps rings that
/// touch at a point separate.
inline std::vector<std::vector<Point>> link_rings(std::span<const DirectedEdge> edges) {
  struct PointHash {
    std::size_t operator()(const Point& p) const noexcept {
      const auto hx = std::hash<double>{}(p.x);
      const auto hy = std::hash<double>{}(p.y);
      return hx ^ (hy + 0x9e3779b97f4a7c15ULL + (hx << 6) + (hx >> 2));
    }
  };
  std::unordered_map<Point, std::vector<std::size_t>, PointHash> outgoing;
  for (std::size_t i = 0; i < edges.size(); ++i) outgoing[edges[i].from].push_back(i);
  // Deterministic traversal order independent of hash iteration.
  std::vector<bool> used(edges.size(), false);
  std::vector<std::vector<Point>> rings;
  for (std::size_t start = 0; start < edges.size(); ++start) {
    if (used[start]) continue;
    std::vector<Point> ring;
    std::size_t current = start;
    bool closed = false;
    while (true) {
      used[current] = true;
      ring.push_back(edges[current].from);
      const Point at = edges[current].to;
      if (at == edges[start].from) {
        closed = true;
        break;
      }
      const Point din = edges[current].to - edges[current].from;
      auto it = outgoing.find(at);
      if (it == outgoing.end()) break;
      std::size_t best = edges.size();
      double best_angle = -10.0;
      for (std::size_t cand : it->second) {
        if (used[cand]) continue;
        const Point dout = edges[cand].to - edges[cand].from;
        const double angle = std::atan2(cross(din, dout), dot(din, dout));
        if (angle > best_angle) {
          best_angle = angle;
          best = cand;
        }
      }
      if (best == edges.size()) break;
      current = best;
    }
    if (closed && ring.size() >= 3) rings.push_back(std::move(ring));
  }
  return rings;
}

/// Drops vertices whose neighbours are collinear with them.
inline std::vector<Point> remove_collinear(std::vector<Point> ring) {
  bool changed = true;
  while (changed && ring.size() >= 3) {
    changed = false;
    std::vector<Point> kept;
    kept.reserve(ring.size());
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point prev = ring[(i + n - 1) % n];
      const Point cur = ring[i];
      const Point next = ring[(i + 1) % n];
      const Point e1 = cur - prev;
      const Point e2 = next - cur;
      const double scale = norm(e1) * norm(e2);
      if (std::abs(cross(e1, e2)) <= 1e-12 * scale && dot(e1, e2) > 0.0) {
        changed = true;
        continue;
      }
      kept.push_back(cur);
    }
    ring = std::move(kept);
  }
  return ring;
}

}  // namespace ztd::detail
