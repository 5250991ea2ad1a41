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

// Sequential features for the region discriminator: masked per-column (or
// per-row) means of a feature grid over a region mask.

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
#include "ztd/mask.hpp"

namespace ztd {

/// Channel-major feature tensor (C x H x W).
class FeatureGrid {
 public:
  FeatureGrid(int channels, int height, int width, float fill = 0.0f)
      : channels_(channels), height_(height), width_(width) {
    if (channels <= 0 || height <= 0 || width <= 0) {
      throw ParameterError("feature grid dimensions must be positive");
    }
    values_.assign(static_cast<std::size_t>(channels) * height * width, fill);
  }

  FeatureGrid(int channels, int height, int width, std::vector<float> values)
      : FeatureGrid(channels, height, width) {
    if (values.size() != values_.size()) throw ParameterError("feature grid value count mismatch");
    for (float v : values) {
      if (!std::isfinite(v)) throw ParameterError("feature grid values must be finite");
    }
    values_ = std::move(values);
  }

  int channels() const noexcept { return channels_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }

  float& at(int c, int r, int col) { return values_[index(c, r, col)]; }
  float at(int c, int r, int col) const { return values_[index(c, r, col)]; }

  std::span<const float> values() const noexcept { return values_; }

  friend bool operator==(const FeatureGrid&, const FeatureGrid&) = default;

 private:
  std::size_t index(int c, int r, int col) const {
    return (static_cast<std::size_t>(c) * height_ + r) * width_ + col;
  }

  int channels_;
  int height_;
  int width_;
  std::vector<float> values_;
};

enum class SequenceLabel : std::uint8_t { shrink_mask = 1, false_positive = 0 };

/// Ordered channel vectors, one per non-empty column or row.
struct SequenceSample {
  std::vector<std::vector<double>> steps;
  SequenceLabel label = SequenceLabel::shrink_mask;

  friend bool operator==(const SequenceSample&, const SequenceSample&) = default;
};

/// Projects the masked features onto the longer side of the mask's bounding
/// box (columns when w >= h, rows otherwise). Each step is the per-channel
/// mean of the masked cells in that column or row; empty ones are dropped.
inline std::vector<std::vector<double>> svd_projection(const BinaryMask& mask,
                                                       const FeatureGrid& feat) {
  require_same_shape(mask.height(), mask.width(), feat.height(), feat.width(), "svd_projection");
  int r0 = mask.height(), r1 = -1, c0 = mask.width(), c1 = -1;
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (!mask.at(r, c)) continue;
      r0 = std::min(r0, r);
      r1 = std::max(r1, r);
      c0 = std::min(c0, c);
      c1 = std::max(c1, c);
    }
  }
  if (r1 < 0) throw ParameterError("svd_projection: mask has no positive cell");
  const bool by_column = (c1 - c0) >= (r1 - r0);
  const int outer_begin = by_column ? c0 : r0;
  const int outer_end = by_column ? c1 : r1;
  const int inner_begin = by_column ? r0 : c0;
  const int inner_end = by_column ? r1 : c1;
  const int channels = feat.channels();

  std::vector<std::vector<double>> steps;
  for (int o = outer_begin; o <= outer_end; ++o) {
    std::vector<double> sum(static_cast<std::size_t>(channels), 0.0);
    int n = 0;
    for (int i = inner_begin; i <= inner_end; ++i) {
      const int r = by_column ? i : o;
      const int c = by_column ? o : i;
      if (!mask.at(r, c)) continue;
      ++n;
      for (int ch = 0; ch < channels; ++ch) sum[ch] += feat.at(ch, r, c);
    }
    if (n == 0) continue;
    for (double& v : sum) v /= n;
    steps.push_back(std::move(sum));
  }
  return steps;
}

/// Sequence sample for a region with the given label.
inline SequenceSample make_sequence_sample(const BinaryMask& mask, const FeatureGrid& feat,
                                           SequenceLabel label) {
  return {svd_projection(mask, feat), label};
}

}  // namespace ztd
