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

// Training targets derived from annotated scenes.
//
// Every label is produced by offsetting the annotation polygons at image
// resolution and then rasterizing the offset polygons at the target scale
// (vertices multiplied by 1/scale), so labels of different resolutions never
// go through image resampling.

#pragma once

#include <string>
#include <vector>

#include "ztd/errors.hpp"
#include "ztd/geometry.hpp"
#include "ztd/mask.hpp"
#include "ztd/offset.hpp"
#include "ztd/scene.hpp"

namespace ztd {

inline constexpr double kDefaultShrinkRatio = 0.4;

/// Label resolution divisor relative to the image.
enum class LabelScale : int { full = 1, quarter = 4, sixteenth = 16 };

inline int scaled_extent(int extent, LabelScale scale) {
  const int div = static_cast<int>(scale);
  return (extent + div - 1) / div;
}

struct InstanceRecord {
  Polygon original;
  std::vector<Polygon> shrink;  // image coordinates; empty if it vanished
  double distance = 0.0;
  bool dontcare = false;
};

struct ShrinkLabels {
  TriStateMask mask;
  std::vector<InstanceRecord> instances;
};

struct LabelSet {
  TriStateMask shrink_full;  // image resolution
  TriStateMask shrink_quarter;
  TriStateMask coarse;  // 1/16 resolution
  TriStateMask margin;  // 1/4 resolution
  std::vector<InstanceRecord> instances;
};

namespace detail {

inline void check_ratio(double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw ParameterError("shrink ratio must lie in (0, 1], got " + std::to_string(ratio));
  }
}

inline Polygon to_label_coords(const Polygon& p, LabelScale scale) {
  if (scale == LabelScale::full) return p;
  return p.scaled(1.0 / static_cast<int>(scale));
}

inline std::vector<InstanceRecord> shrink_instances(const SceneSample& sample, double ratio) {
  check_ratio(ratio);
  std::vector<InstanceRecord> out;
  out.reserve(sample.annotations.size());
  for (const Annotation& a : sample.annotations) {
    InstanceRecord rec{a.polygon, {}, 0.0, a.dontcare};
    if (!a.dontcare) {
      rec.distance = offset_distance(a.polygon, ratio);
      rec.shrink = shrink_polygon(a.polygon, rec.distance);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

inline TriStateMask render_shrink(const SceneSample& sample,
                                  const std::vector<InstanceRecord>& instances, LabelScale scale) {
  TriStateMask mask(scaled_extent(sample.height, scale), scaled_extent(sample.width, scale),
                    Tri::neg);
  for (const InstanceRecord& rec : instances) {
    for (const Polygon& piece : rec.shrink) {
      fill_polygon(mask, to_label_coords(piece, scale), Tri::pos);
    }
  }
  for (const InstanceRecord& rec : instances) {
    if (rec.dontcare) fill_polygon(mask, to_label_coords(rec.original, scale), Tri::ign);
  }
  return mask;
}

inline TriStateMask render_margin(const SceneSample& sample,
                                  const std::vector<InstanceRecord>& instances, double ratio) {
  constexpr LabelScale kScale = LabelScale::quarter;
  const int h = scaled_extent(sample.height, kScale);
  const int w = scaled_extent(sample.width, kScale);

  TriStateMask inner_result(h, w, Tri::neg);
  BinaryMask text(h, w, 0);
  BinaryMask dontcare(h, w, 0);
  for (const InstanceRecord& rec : instances) {
    if (rec.dontcare) {
      fill_polygon(dontcare, to_label_coords(rec.original, kScale), std::uint8_t{1});
      continue;
    }
    fill_polygon(text, to_label_coords(rec.original, kScale), std::uint8_t{1});

    // (1) S1 is the shrink-mask; (2) S2 shrinks every S1 piece again with
    // the distance rule applied to that piece.
    BinaryMask s1(h, w, 0);
    BinaryMask s2(h, w, 0);
    for (const Polygon& piece : rec.shrink) {
      fill_polygon(s1, to_label_coords(piece, kScale), std::uint8_t{1});
      for (const Polygon& inner : shrink_polygon(piece, offset_distance(piece, ratio))) {
        fill_polygon(s2, to_label_coords(inner, kScale), std::uint8_t{1});
      }
    }
    // (3) S1 ors ignored S2.
    inner_result = ors(inner_result, ors(to_tristate(s1), ignore_positive(s2)));
  }
  // (4) reversed text mask with its '1' region ignored; (5) ors with (3).
  TriStateMask label = ors(ignore_positive(reverse(text)), inner_result);
  return ors(label, ignore_positive(dontcare));
}

}  // namespace detail

/// Shrink-mask label at `scale`: shrunk instances are positive, dont-care
/// instances (unshrunk) are ignored, everything else negative.
inline ShrinkLabels gen_shrink_labels(const SceneSample& sample,
                                      double ratio = kDefaultShrinkRatio,
                                      LabelScale scale = LabelScale::full) {
  auto instances = detail::shrink_instances(sample, ratio);
  TriStateMask mask = detail::render_shrink(sample, instances, scale);
  return {std::move(mask), std::move(instances)};
}

/// Coarse shrink-mask label at 1/16 resolution.
inline TriStateMask gen_coarse_label(const SceneSample& sample,
                                     double ratio = kDefaultShrinkRatio) {
  return detail::render_shrink(sample, detail::shrink_instances(sample, ratio),
                               LabelScale::sixteenth);
}

/// Tri-state margin label at 1/4 resolution: positive on S1 minus S2,
/// negative on text minus S1, ignored on background, S2 and dont-care text.
inline TriStateMask gen_margin_label(const SceneSample& sample,
                                     double ratio = kDefaultShrinkRatio) {
  return detail::render_margin(sample, detail::shrink_instances(sample, ratio), ratio);
}

/// All labels for one sample, sharing a single set of offset computations.
inline LabelSet gen_label_set(const SceneSample& sample, double ratio = kDefaultShrinkRatio) {
  auto instances = detail::shrink_instances(sample, ratio);
  LabelSet set{detail::render_shrink(sample, instances, LabelScale::full),
               detail::render_shrink(sample, instances, LabelScale::quarter),
               detail::render_shrink(sample, instances, LabelScale::sixteenth),
               detail::render_margin(sample, instances, ratio),
               {}};
  set.instances = std::move(instances);
  return set;
}

}  // namespace ztd
