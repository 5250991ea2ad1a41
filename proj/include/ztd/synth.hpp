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

// Seeded synthetic scenes: text-like quads, rotated quads and curved bands
// drawn into a noisy grayscale image.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ztd/errors.hpp"
#include "ztd/geometry.hpp"
#include "ztd/mask.hpp"
#include "ztd/scene.hpp"

namespace ztd {

/// SplitMix64 generator. All sampling goes through this type so streams are
/// identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo + 1);
    return static_cast<int>(lo + static_cast<std::int64_t>(next() % span));
  }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

struct SynthConfig {
  std::uint64_t seed = 0;
  int width = 256;
  int height = 256;
  int min_instances = 3;
  int max_instances = 6;
  // Relative frequencies of the three shape kinds.
  double quad_weight = 1.0;
  double rotated_quad_weight = 1.0;
  double arc_band_weight = 1.0;
  double min_scale = 10.0;  // text height in pixels
  double max_scale = 24.0;
  double min_aspect = 2.0;  // length / height
  double max_aspect = 6.0;
  double min_rotation_deg = -30.0;
  double max_rotation_deg = 30.0;
  double adjacency_probability = 0.2;
  double dontcare_probability = 0.1;
  int noise_amplitude = 8;

  void validate() const {
    if (width < 16 || height < 16) throw ParameterError("synthetic image must be at least 16x16");
    if (min_instances < 0 || min_instances > max_instances) {
      throw ParameterError("instance count range must be non-empty and non-negative");
    }
    if (!(quad_weight >= 0 && rotated_quad_weight >= 0 && arc_band_weight >= 0) ||
        !(quad_weight + rotated_quad_weight + arc_band_weight > 0)) {
      throw ParameterError("shape weights must be non-negative with a positive sum");
    }
    if (!(min_scale >= 4.0 && min_scale <= max_scale)) throw ParameterError("scale range must lie in [4, inf) and be non-empty");
    if (!(min_aspect >= 1.0 && min_aspect <= max_aspect)) throw ParameterError("aspect range must lie in [1, inf) and be non-empty");
    if (!(min_rotation_deg <= max_rotation_deg) || !std::isfinite(min_rotation_deg) ||
        !std::isfinite(max_rotation_deg)) {
      throw ParameterError("rotation range must be non-empty");
    }
    if (!(adjacency_probability >= 0 && adjacency_probability <= 1)) {
      throw ParameterError("adjacency probability must lie in [0, 1]");
    }
    if (!(dontcare_probability >= 0 && dontcare_probability <= 1)) {
      throw ParameterError("dontcare probability must lie in [0, 1]");
    }
    if (noise_amplitude < 0 || noise_amplitude > 64) throw ParameterError("noise amplitude must lie in [0, 64]");
  }
};

struct SynthSample {
  SceneSample scene;
  GrayImage image;
};

enum class ShapeKind { quad, rotated_quad, arc_band };

namespace detail {

inline constexpr double kSynthMargin = 2.0;      // pixels kept clear at the border
inline constexpr double kSynthSeparation = 8.0;  // minimum gap between unrelated instances
inline constexpr double kAdjacentGapMin = 1.0;
inline constexpr double kAdjacentGapMax = 4.0;
inline constexpr int kArcSamples = 7;            // points per arc side
inline constexpr int kPlacementAttempts = 60;
inline constexpr int kShrinkRounds = 6;

/// Text instance parameters. For arc bands (cx, cy) is the arc centre and
/// `radius` the mid-line radius; the band spans `sweep` radians around
/// `angle` - pi/2.
struct ShapeSpec {
  ShapeKind kind = ShapeKind::quad;
  double cx = 0, cy = 0;
  double h = 0, length = 0;
  double angle = 0;
  double radius = 0, sweep = 0;
};

inline double snap(double v) { return std::round(v * 1000.0) / 1000.0 + 0.0; }

inline Polygon build_shape(const ShapeSpec& s) {
  std::vector<Point> pts;
  const double ca = std::cos(s.angle), sa = std::sin(s.angle);
  if (s.kind == ShapeKind::arc_band) {
    const double mid = s.angle - std::numbers::pi / 2;
    const double ro = s.radius + s.h / 2, ri = s.radius - s.h / 2;
    for (int k = 0; k < kArcSamples; ++k) {
      const double t = mid - s.sweep / 2 + s.sweep * k / (kArcSamples - 1);
      pts.push_back({snap(s.cx + ro * std::cos(t)), snap(s.cy + ro * std::sin(t))});
    }
    for (int k = kArcSamples - 1; k >= 0; --k) {
      const double t = mid - s.sweep / 2 + s.sweep * k / (kArcSamples - 1);
      pts.push_back({snap(s.cx + ri * std::cos(t)), snap(s.cy + ri * std::sin(t))});
    }
  } else {
    const double xs[4] = {-s.length / 2, s.length / 2, s.length / 2, -s.length / 2};
    const double ys[4] = {-s.h / 2, -s.h / 2, s.h / 2, s.h / 2};
    for (int k = 0; k < 4; ++k) {
      pts.push_back({snap(s.cx + xs[k] * ca - ys[k] * sa), snap(s.cy + xs[k] * sa + ys[k] * ca)});
    }
  }
  return Polygon(std::move(pts));
}

inline ShapeKind draw_kind(const SynthConfig& cfg, SplitMix64& rng) {
  const double total = cfg.quad_weight + cfg.rotated_quad_weight + cfg.arc_band_weight;
  const double u = rng.uniform() * total;
  if (u < cfg.quad_weight) return ShapeKind::quad;
  if (u < cfg.quad_weight + cfg.rotated_quad_weight) return ShapeKind::rotated_quad;
  return ShapeKind::arc_band;
}

inline ShapeSpec draw_shape(const SynthConfig& cfg, double shrink, SplitMix64& rng) {
  ShapeSpec s;
  s.kind = draw_kind(cfg, rng);
  s.h = rng.uniform(cfg.min_scale, cfg.max_scale) * shrink;
  s.length = s.h * rng.uniform(cfg.min_aspect, cfg.max_aspect);
  const double deg = rng.uniform(cfg.min_rotation_deg, cfg.max_rotation_deg);
  s.angle = s.kind == ShapeKind::quad ? 0.0 : deg * std::numbers::pi / 180.0;
  s.cx = rng.uniform(0.0, cfg.width);
  s.cy = rng.uniform(0.0, cfg.height);
  if (s.kind == ShapeKind::arc_band) {
    s.sweep = rng.uniform(0.6, 1.4);
    s.radius = std::max(s.length / s.sweep, s.h);
    // Place the arc centre below the band's mid-point.
    const double mid = s.angle - std::numbers::pi / 2;
    s.cx -= s.radius * std::cos(mid);
    s.cy -= s.radius * std::sin(mid);
  }
  return s;
}

/// A second text line stacked next to `base` at a gap of 2..4 pixels.
inline ShapeSpec draw_neighbour(const SynthConfig& cfg, const ShapeSpec& base, double shrink,
                                SplitMix64& rng) {
  ShapeSpec s = base;
  s.h = rng.uniform(cfg.min_scale, cfg.max_scale) * shrink;
  const double gap = rng.uniform(2.0, kAdjacentGapMax);
  const double step = base.h / 2 + gap + s.h / 2;
  const bool outward = rng.bernoulli(0.5);
  if (base.kind == ShapeKind::arc_band) {
    s.radius = base.radius + (outward ? step : -step);
    if (s.radius - s.h / 2 <= 1.0) s.radius = base.radius + step;
    s.length = s.radius * s.sweep;
  } else {
    s.length = s.h * rng.uniform(cfg.min_aspect, cfg.max_aspect);
    const double nx = -std::sin(base.angle), ny = std::cos(base.angle);
    const double sign = outward ? 1.0 : -1.0;
    const double slide = rng.uniform(-0.25, 0.25) * base.length;
    s.cx = base.cx + sign * step * nx + slide * std::cos(base.angle);
    s.cy = base.cy + sign * step * ny + slide * std::sin(base.angle);
  }
  return s;
}

inline bool inside_image(const Polygon& p, const SynthConfig& cfg) {
  for (const Point& v : p.vertices()) {
    if (v.x < kSynthMargin || v.y < kSynthMargin || v.x > cfg.width - kSynthMargin ||
        v.y > cfg.height - kSynthMargin) {
      return false;
    }
  }
  return true;
}

inline bool overlaps(const Polygon& a, const Polygon& b) {
  return boundary_distance(a, b) == 0.0 || contains(a, b[0]) || contains(b, a[0]);
}

inline std::string draw_word(double aspect, SplitMix64& rng) {
  static constexpr char kLetters[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
  const int len = std::clamp(static_cast<int>(std::lround(aspect * 1.5)), 1, 12);
  std::string w;
  for (int i = 0; i < len; ++i) w.push_back(kLetters[rng.uniform_int(0, sizeof(kLetters) - 2)]);
  return w;
}

}  // namespace detail

/// Deterministic function of (cfg, index). Unrelated instances keep at
/// least 8 pixels apart; with probability `adjacency_probability` an
/// instance is instead stacked 1..4 pixels from an earlier one. Instances
/// that do not fit are retried at smaller scales.
inline SynthSample synth_scene(const SynthConfig& cfg, std::uint64_t index) {
  cfg.validate();
  SplitMix64 rng(SplitMix64(cfg.seed).next() ^ (index * 0xD1B54A32D192ED03ULL));
  const int count = rng.uniform_int(cfg.min_instances, cfg.max_instances);

  std::vector<detail::ShapeSpec> specs;
  std::vector<Polygon> polys;
  for (int n = 0; n < count; ++n) {
    bool placed = false;
    double shrink = 1.0;
    for (int round = 0; round < detail::kShrinkRounds && !placed; ++round, shrink *= 0.7) {
      for (int attempt = 0; attempt < detail::kPlacementAttempts && !placed; ++attempt) {
        // The second half of each round places freely.
        const bool adjacent = !specs.empty() && attempt < detail::kPlacementAttempts / 2 &&
                              rng.bernoulli(cfg.adjacency_probability);
        std::size_t base = 0;
        detail::ShapeSpec spec;
        if (adjacent) {
          base = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(specs.size()) - 1));
          spec = detail::draw_neighbour(cfg, specs[base], shrink, rng);
        } else {
          spec = detail::draw_shape(cfg, shrink, rng);
        }
        std::optional<Polygon> built;
        try {
          built.emplace(detail::build_shape(spec));
        } catch (const GeometryError&) {
          continue;
        }
        Polygon& poly = *built;
        if (!detail::inside_image(poly, cfg)) continue;
        bool ok = true;
        for (std::size_t k = 0; k < polys.size() && ok; ++k) {
          const double gap = boundary_distance(poly, polys[k]);
          if (detail::overlaps(poly, polys[k])) {
            ok = false;
          } else if (adjacent && k == base) {
            ok = gap >= detail::kAdjacentGapMin && gap <= detail::kAdjacentGapMax;
          } else {
            ok = gap >= detail::kSynthSeparation;
          }
        }
        if (!ok) continue;
        specs.push_back(spec);
        polys.push_back(std::move(poly));
        placed = true;
      }
    }
    if (!placed) throw ParameterError("synthetic scene too crowded for the requested instance count");
  }

  SynthSample out{{cfg.width, cfg.height, {}}, GrayImage(cfg.height, cfg.width, 0)};
  const auto background = static_cast<std::uint8_t>(rng.uniform_int(20, 90));
  std::fill(out.image.cells().begin(), out.image.cells().end(), background);
  for (std::size_t k = 0; k < polys.size(); ++k) {
    const bool dontcare = rng.bernoulli(cfg.dontcare_probability);
    const double aspect = specs[k].length / specs[k].h;
    std::string text = dontcare ? std::string("###") : detail::draw_word(aspect, rng);
    // Distinct levels for the first 100 instances.
    const auto level = static_cast<std::uint8_t>(140 + (k * 37) % 100);
    fill_polygon(out.image, polys[k], level);
    out.scene.annotations.push_back({polys[k], std::move(text), dontcare});
  }
  if (cfg.noise_amplitude > 0) {
    for (std::uint8_t& v : out.image.cells()) {
      const int noisy = v + rng.uniform_int(-cfg.noise_amplitude, cfg.noise_amplitude);
      v = static_cast<std::uint8_t>(std::clamp(noisy, 0, 255));
    }
  }
  return out;
}

}  // namespace ztd
