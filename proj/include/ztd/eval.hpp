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
#include <cstddef>
#include <span>
#include <tuple>
#include <vector>

#include "ztd/detail/arrangement.hpp"
#include "ztd/errors.hpp"
#include "ztd/geometry.hpp"
#include "ztd/scene.hpp"

namespace ztd {

/// Intersection over union of two simple polygons.
inline double polygon_iou(const Polygon& a, const Polygon& b) {
  const auto bbox = [](const Polygon& p) {
    double x0 = p[0].x, y0 = p[0].y, x1 = x0, y1 = y0;
    for (const Point& v : p.vertices()) {
      x0 = std::min(x0, v.x);
      y0 = std::min(y0, v.y);
      x1 = std::max(x1, v.x);
      y1 = std::max(y1, v.y);
    }
    return std::tuple{x0, y0, x1, y1};
  };
  const auto [ax0, ay0, ax1, ay1] = bbox(a);
  const auto [bx0, by0, bx1, by1] = bbox(b);
  if (ax1 <= bx0 || bx1 <= ax0 || ay1 <= by0 || by1 <= ay0) return 0.0;

  detail::Arrangement arr;
  arr.add_path(a.vertices(), 0);
  arr.add_path(b.vertices(), 1);
  const auto edges = arr.boundary([](const detail::Windings& w) { return w[0] > 0 && w[1] > 0; });
  const double inter = std::max(0.0, detail::boundary_area(edges));
  const double uni = polygon_area(a) + polygon_area(b) - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

struct Match {
  std::size_t det = 0;
  std::size_t gt = 0;
  double iou = 0.0;

  friend bool operator==(const Match&, const Match&) = default;
};

/// Additive per-image counts; P/R/F are recomputed from summed counts.
struct EvalCounts {
  std::size_t true_positives = 0;
  std::size_t detections = 0;
  std::size_t ground_truths = 0;

  EvalCounts& operator+=(const EvalCounts& o) {
    true_positives += o.true_positives;
    detections += o.detections;
    ground_truths += o.ground_truths;
    return *this;
  }
  friend bool operator==(const EvalCounts&, const EvalCounts&) = default;
};

struct EvalReport {
  double precision = 1.0;
  double recall = 1.0;
  double fmeasure = 1.0;
  std::vector<Match> matches;
  EvalCounts counts;
};

/// P = TP / dets and R = TP / gts, each 1 when its denominator is empty.
inline EvalReport report_from_counts(const EvalCounts& c) {
  EvalReport r;
  r.counts = c;
  r.precision = c.detections == 0 ? 1.0 : static_cast<double>(c.true_positives) / c.detections;
  r.recall = c.ground_truths == 0 ? 1.0 : static_cast<double>(c.true_positives) / c.ground_truths;
  const double sum = r.precision + r.recall;
  r.fmeasure = sum > 0.0 ? 2.0 * r.precision * r.recall / sum : 0.0;
  return r;
}

/// One-to-one greedy matching by descending IoU.
///
/// Detections overlapping a dont-care ground truth with IoU >= iou_threshold
/// are excluded from counting, as are dont-care ground truths themselves.
/// Ties in IoU are broken by (detection index, ground-truth index).
inline EvalReport match_detections(std::span<const Detection> dets,
                                   std::span<const Annotation> gts,
                                   double iou_threshold = 0.5) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw ParameterError("iou threshold must lie in (0, 1)");
  }
  std::vector<bool> det_counted(dets.size(), true);
  for (std::size_t d = 0; d < dets.size(); ++d) {
    for (const Annotation& g : gts) {
      if (g.dontcare && polygon_iou(dets[d].contour, g.polygon) >= iou_threshold) {
        det_counted[d] = false;
        break;
      }
    }
  }

  std::vector<Match> candidates;
  for (std::size_t d = 0; d < dets.size(); ++d) {
    if (!det_counted[d]) continue;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gts[g].dontcare) continue;
      const double iou = polygon_iou(dets[d].contour, gts[g].polygon);
      if (iou >= iou_threshold) candidates.push_back({d, g, iou});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Match& l, const Match& r) {
    if (l.iou != r.iou) return l.iou > r.iou;
    if (l.det != r.det) return l.det < r.det;
    return l.gt < r.gt;
  });

  std::vector<bool> det_used(dets.size(), false);
  std::vector<bool> gt_used(gts.size(), false);
  std::vector<Match> matches;
  for (const Match& m : candidates) {
    if (det_used[m.det] || gt_used[m.gt]) continue;
    det_used[m.det] = gt_used[m.gt] = true;
    matches.push_back(m);
  }

  EvalCounts counts;
  counts.true_positives = matches.size();
  counts.detections = static_cast<std::size_t>(std::count(det_counted.begin(), det_counted.end(), true));
  counts.ground_truths = static_cast<std::size_t>(
      std::count_if(gts.begin(), gts.end(), [](const Annotation& g) { return !g.dontcare; }));
  EvalReport report = report_from_counts(counts);
  report.matches = std::move(matches);
  return report;
}

}  // namespace ztd
