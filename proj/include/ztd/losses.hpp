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

// Reference loss terms for shrink-mask training. Ignored cells are excluded
// from every sum, so they carry no gradient.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "ztd/errors.hpp"
#include "ztd/mask.hpp"

namespace ztd {

inline constexpr double kDiceSmooth = 1.0;
inline constexpr double kBceClamp = 1e-7;

/// Weights of the shrink, margin (zoom-in), coarse (zoom-out) and
/// discriminator terms.
struct LossWeights {
  double alpha = 1.0;
  double beta = 0.25;
  double gamma = 0.25;
  double eta = 0.25;
};

namespace detail {

struct DiceSums {
  double inter = 0.0;
  double pred = 0.0;
  double gt = 0.0;
};

inline DiceSums dice_sums(const ProbabilityMap& pred, const TriStateMask& gt) {
  require_same_shape(pred.height(), pred.width(), gt.height(), gt.width(), "dice_loss");
  DiceSums s;
  const auto p = pred.cells();
  const auto g = gt.cells();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (g[i] == Tri::ign) continue;
    const double pv = p[i];
    const double gv = g[i] == Tri::pos ? 1.0 : 0.0;
    s.inter += pv * gv;
    s.pred += pv;
    s.gt += gv;
  }
  return s;
}

}  // namespace detail

/// Soft dice loss 1 - (2 sum(p g) + 1) / (sum(p) + sum(g) + 1) over
/// non-ignored cells.
inline double dice_loss(const ProbabilityMap& pred, const TriStateMask& gt) {
  const detail::DiceSums s = detail::dice_sums(pred, gt);
  return 1.0 - (2.0 * s.inter + kDiceSmooth) / (s.pred + s.gt + kDiceSmooth);
}

/// Analytic gradient of dice_loss with respect to every prediction cell.
/// Ignored cells get exactly zero.
inline Raster<double, ProbabilityTag> dice_gradient(const ProbabilityMap& pred,
                                                    const TriStateMask& gt) {
  const detail::DiceSums s = detail::dice_sums(pred, gt);
  const double denom = s.pred + s.gt + kDiceSmooth;
  const double numer = 2.0 * s.inter + kDiceSmooth;
  Raster<double, ProbabilityTag> grad(pred.height(), pred.width(), 0.0);
  auto out = grad.cells();
  const auto g = gt.cells();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (g[i] == Tri::ign) continue;
    const double gv = g[i] == Tri::pos ? 1.0 : 0.0;
    out[i] = -(2.0 * gv * denom - numer) / (denom * denom);
  }
  return grad;
}

/// Binary cross-entropy of one prediction against a hard label, with the
/// prediction clamped to [1e-7, 1 - 1e-7].
inline double bce_loss(double pred, int gt) {
  if (gt != 0 && gt != 1) throw ParameterError("bce_loss label must be 0 or 1");
  const double p = std::clamp(pred, kBceClamp, 1.0 - kBceClamp);
  return gt == 1 ? -std::log(p) : -std::log(1.0 - p);
}

/// Mean BCE over the non-ignored cells of a map; 0 when every cell is ignored.
inline double bce_loss(const ProbabilityMap& pred, const TriStateMask& gt) {
  require_same_shape(pred.height(), pred.width(), gt.height(), gt.width(), "bce_loss");
  double sum = 0.0;
  std::size_t n = 0;
  const auto p = pred.cells();
  const auto g = gt.cells();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (g[i] == Tri::ign) continue;
    sum += bce_loss(p[i], g[i] == Tri::pos ? 1 : 0);
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

/// Weighted sum of the four loss terms.
inline double total_loss(double l_sm, double l_zi, double l_zo, double l_svd,
                         const LossWeights& w = {}) {
  for (double v : {l_sm, l_zi, l_zo, l_svd}) {
    if (!std::isfinite(v)) throw ParameterError("total_loss: non-finite component loss");
  }
  for (double v : {w.alpha, w.beta, w.gamma, w.eta}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("total_loss: invalid weight");
  }
  return w.alpha * l_sm + w.beta * l_zi + w.gamma * l_zo + w.eta * l_svd;
}

}  // namespace ztd
