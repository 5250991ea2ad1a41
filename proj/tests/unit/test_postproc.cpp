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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ztd/eval.hpp"
#include "ztd/postproc.hpp"

namespace ztd {
namespace {

BinaryMask mask_from(const std::vector<std::vector<int>>& rows) {
  BinaryMask m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()), 0);
  for (int r = 0; r < m.height(); ++r) {
    for (int c = 0; c < m.width(); ++c) m.at(r, c) = static_cast<std::uint8_t>(rows[r][c]);
  }
  return m;
}

ProbabilityMap map_from(const BinaryMask& m, float on = 1.0f) {
  ProbabilityMap pm(m.height(), m.width(), 0.0f);
  for (std::size_t i = 0; i < m.size(); ++i) pm.cells()[i] = m.cells()[i] ? on : 0.0f;
  return pm;
}

// Even-odd cell membership of a traced contour, evaluated at cell centres.
BinaryMask fill_of(const Polygon& p, int h, int w) {
  BinaryMask m(h, w, 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) m.at(r, c) = oracle::point_in_ring(p.vertices(), c + 0.5, r + 0.5);
  }
  return m;
}

// Outer fill of a component: the component plus every hole cell, found by
// flooding the background from the border with 4-connectivity (the dual of
// 8-connected components) or 8-connectivity (dual of 4).
BinaryMask filled_component(const Component& comp, int h, int w, int connectivity) {
  BinaryMask in(h, w, 0);
  for (const Cell& c : comp.cells) in.at(c.row, c.col) = 1;
  BinaryMask outside(h + 2, w + 2, 0);
  std::vector<Cell> stack{{0, 0}};
  outside.at(0, 0) = 1;
  const int background = connectivity == 8 ? 4 : 8;
  const int dr[8] = {-1, 1, 0, 0, -1, -1, 1, 1};
  const int dc[8] = {0, 0, -1, 1, -1, 1, -1, 1};
  while (!stack.empty()) {
    const Cell cur = stack.back();
    stack.pop_back();
    for (int k = 0; k < background; ++k) {
      const int r = cur.row + dr[k], c = cur.col + dc[k];
      if (r < 0 || r >= h + 2 || c < 0 || c >= w + 2 || outside.at(r, c)) continue;
      if (r >= 1 && r <= h && c >= 1 && c <= w && in.at(r - 1, c - 1)) continue;
      outside.at(r, c) = 1;
      stack.push_back({r, c});
    }
  }
  BinaryMask out(h, w, 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) out.at(r, c) = outside.at(r + 1, c + 1) ? 0 : 1;
  }
  return out;
}

TEST(Binarize, StrictThreshold) {
  const ProbabilityMap pm(1, 2, std::vector<float>{0.2f, 0.7f});
  EXPECT_EQ(binarize(pm, 0.5), BinaryMask(1, 2, std::vector<std::uint8_t>{0, 1}));
  EXPECT_EQ(binarize(ProbabilityMap(3, 3, 0.5f), 0.5), BinaryMask(3, 3, 0));
  const BinaryMask gt = rasterize(make_rectangle(2, 3, 9, 7), 10, 12);
  EXPECT_EQ(binarize(map_from(gt), 0.5), gt);
  EXPECT_THROW(binarize(pm, 1.0), ParameterError);
}

TEST(ConnectedComponents, Examples) {
  const BinaryMask m = mask_from({{1, 1, 0, 1}, {0, 0, 0, 1}});
  for (int conn : {4, 8}) {
    const auto comps = connected_components(m, conn);
    ASSERT_EQ(comps.size(), 2u);
    EXPECT_EQ(comps[0].cells, (std::vector<Cell>{{0, 0}, {0, 1}}));
    EXPECT_EQ(comps[1].cells, (std::vector<Cell>{{0, 3}, {1, 3}}));
  }
  EXPECT_TRUE(connected_components(BinaryMask(4, 4, 0)).empty());
  EXPECT_THROW(connected_components(m, 6), ParameterError);
}

TEST(ConnectedComponents, DiagonalNeighboursDependOnConnectivity) {
  const BinaryMask m = mask_from({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_EQ(connected_components(m, 8).size(), 1u);
  EXPECT_EQ(connected_components(m, 4).size(), 3u);
}

TEST(ConnectedComponents, PartitionOfPositiveCells) {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution bit(0.45);
  for (int trial = 0; trial < 50; ++trial) {
    BinaryMask m(17, 23, 0);
    for (auto& v : m.cells()) v = bit(rng);
    for (int conn : {4, 8}) {
      const auto comps = connected_components(m, conn);
      BinaryMask seen(17, 23, 0);
      std::size_t total = 0;
      Cell prev{-1, -1};
      for (const Component& comp : comps) {
        const Cell first = comp.cells.front();
        EXPECT_TRUE(first.row > prev.row || (first.row == prev.row && first.col > prev.col));
        prev = first;
        for (const Cell& c : comp.cells) {
          EXPECT_EQ(m.at(c.row, c.col), 1);
          EXPECT_EQ(seen.at(c.row, c.col), 0);
          seen.at(c.row, c.col) = 1;
        }
        total += comp.cells.size();
      }
      EXPECT_EQ(total, count(m, std::uint8_t{1}));
      // Maximality: no two cells of different components are neighbours.
      const auto again = connected_components(m, conn);
      EXPECT_EQ(again.size(), comps.size());
    }
  }
}

TEST(TraceContour, Examples) {
  const auto block = connected_components(mask_from({{1, 1}, {1, 1}}));
  EXPECT_EQ(trace_contour(block[0]), make_rectangle(0, 0, 2, 2));

  BinaryMask single(5, 7, 0);
  single.at(3, 5) = 1;
  EXPECT_EQ(trace_contour(connected_components(single)[0]), make_rectangle(5, 3, 6, 4));

  const auto tromino = connected_components(mask_from({{1, 0}, {1, 1}}));
  const Polygon l = trace_contour(tromino[0]);
  EXPECT_EQ(l.size(), 6u);
  EXPECT_DOUBLE_EQ(polygon_area(l), 3.0);
  EXPECT_GT(signed_area(l.vertices()), 0.0);
}

TEST(TraceContour, DiagonalPinchStaysSimple) {
  const auto comps = connected_components(mask_from({{1, 0}, {0, 1}}), 8);
  ASSERT_EQ(comps.size(), 1u);
  const Polygon p = trace_contour(comps[0], 8);
  EXPECT_NEAR(polygon_area(p), 2.0, 1e-3);
  EXPECT_EQ(fill_of(p, 2, 2), mask_from({{1, 0}, {0, 1}}));
}

TEST(TraceContour, FillEqualsComponentWithHolesFilled) {
  std::mt19937_64 rng(21);
  std::bernoulli_distribution bit(0.55);
  int traced = 0;
  for (int trial = 0; trial < 150; ++trial) {
    BinaryMask m(12, 14, 0);
    for (auto& v : m.cells()) v = bit(rng);
    for (int conn : {4, 8}) {
      for (const Component& comp : connected_components(m, conn)) {
        const Polygon p = trace_contour(comp, conn);
        ASSERT_EQ(fill_of(p, 12, 14), filled_component(comp, 12, 14, conn)) << "trial " << trial;
        ++traced;
      }
    }
  }
  EXPECT_GT(traced, 1000);
}

TEST(SimplifyRing, KeepsCornersAndDropsStaircase) {
  const std::vector<Point> square{{0, 0}, {5, 0}, {10, 0}, {10, 10}, {0, 10}};
  EXPECT_EQ(simplify_ring(square, 0.5), (std::vector<Point>{{0, 0}, {10, 0}, {10, 10}, {0, 10}}));
  std::vector<Point> stairs{{0, 0}};
  for (int i = 0; i < 10; ++i) {
    stairs.push_back({static_cast<double>(i + 1), static_cast<double>(i)});
    stairs.push_back({static_cast<double>(i + 1), static_cast<double>(i + 1)});
  }
  stairs.push_back({0, 10});
  const auto s = simplify_ring(stairs, 1.0);
  EXPECT_LT(s.size(), 6u);
  EXPECT_NEAR(signed_area(s), signed_area(stairs), 6.0);
}

TEST(PostprocConfig, DefaultsAndValidation) {
  const PostprocConfig cfg;
  EXPECT_EQ(cfg.bin_threshold, 0.5);
  EXPECT_EQ(cfg.min_area, 16.0);
  EXPECT_EQ(cfg.min_score, 0.55);
  EXPECT_EQ(cfg.extend_ratio, 1.5);
  EXPECT_EQ(cfg.connectivity, 8);
  PostprocConfig bad;
  bad.extend_ratio = 0.0;
  EXPECT_THROW(detect(ProbabilityMap(4, 4), bad), ParameterError);
  bad = {};
  bad.bin_threshold = 0.0;
  EXPECT_THROW(detect(ProbabilityMap(4, 4), bad), ParameterError);
}

TEST(Detect, ShrunkSquareIsRebuilt) {
  const Polygon text = make_rectangle(0, 0, 100, 100);
  const ProbabilityMap pm = map_from(rasterize(make_rectangle(21, 21, 79, 79), 100, 100));
  PostprocConfig cfg;
  // Traced contour is (21, 21)-(79, 79): d' = 3364 * k / 232 = 21.
  cfg.extend_ratio = 21.0 * 232.0 / 3364.0;
  const auto dets = detect(pm, cfg);
  ASSERT_EQ(dets.size(), 1u);
  EXPECT_EQ(dets[0].score, 1.0);
  EXPECT_GE(polygon_iou(dets[0].contour, text), 0.95);
}

TEST(Detect, EmptyAndFilteredMaps) {
  EXPECT_TRUE(detect(ProbabilityMap(32, 32, 0.0f)).empty());
  // Below min_area.
  EXPECT_TRUE(detect(map_from(rasterize(make_rectangle(4, 4, 7, 9), 32, 32))).empty());
  // Score below min_score.
  EXPECT_TRUE(detect(map_from(rasterize(make_rectangle(4, 4, 20, 20), 32, 32), 0.52f)).empty());
}

TEST(Detect, OutputScaleMultipliesVertices) {
  const ProbabilityMap pm = map_from(rasterize(make_rectangle(10, 10, 30, 20), 40, 40));
  const auto base = detect(pm);
  const auto scaled = detect(pm, {}, 4.0);
  ASSERT_EQ(base.size(), 1u);
  ASSERT_EQ(scaled.size(), 1u);
  EXPECT_EQ(scaled[0].contour, base[0].contour.scaled(4.0));
}

TEST(Detect, TwoSquaresGiveTwoDetections) {
  const Polygon a = make_rectangle(10, 10, 60, 50);
  const Polygon b = make_rectangle(80, 20, 140, 70);
  std::vector<Polygon> shrunk;
  for (const Polygon& p : {a, b}) shrunk.push_back(shrink_polygon(p, offset_distance(p, 0.4))[0]);
  const auto dets = detect(map_from(rasterize(shrunk, 100, 160)));
  ASSERT_EQ(dets.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    const double d = polygon_area(shrunk[i]) * 1.5 / polygon_perimeter(shrunk[i]);
    EXPECT_GE(polygon_iou(dets[i].contour, expand_polygon(shrunk[i], d)), 0.9);
  }
}

TEST(Detect, SeparatedRegionsStaySeparate) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> size(5, 30);
  std::uniform_int_distribution<int> gap(2, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const int w0 = size(rng), h0 = size(rng), w1 = size(rng), h1 = size(rng), g = gap(rng);
    BinaryMask m(64, 80, 0);
    fill_polygon(m, make_rectangle(2, 2, 2 + w0, 2 + h0), std::uint8_t{1});
    fill_polygon(m, make_rectangle(2 + w0 + g, 2, 2 + w0 + g + w1, 2 + h1), std::uint8_t{1});
    PostprocConfig cfg;
    cfg.min_area = 0;
    EXPECT_GE(detect(map_from(m), cfg).size(), 2u);
  }
}

struct RoundTripStats {
  double mean = 0.0;
  double worst = 1.0;
};

template <typename Draw>
RoundTripStats detect_round_trip(Draw&& draw_ring) {
  std::mt19937_64 rng(7);
  const PostprocConfig cfg;
  RoundTripStats stats;
  int tested = 0;
  for (int draw = 0; tested < 100; ++draw) {
    const auto ring = draw_ring(rng, draw);
    if (ring.empty()) continue;
    const Polygon p(ring);
    const double d = offset_distance(p, 0.4);
    if (!(oracle::convex_inradius(ring) > 2.0 * d)) continue;
    const auto pieces = shrink_polygon(p, d);
    EXPECT_EQ(pieces.size(), 1u);
    const auto dets = detect(map_from(rasterize(pieces[0], 512, 512)), cfg);
    EXPECT_EQ(dets.size(), 1u) << "draw " << draw;
    if (dets.size() != 1) continue;
    const double iou = polygon_iou(dets[0].contour, p);
    stats.mean += iou;
    stats.worst = std::min(stats.worst, iou);
    ++tested;
  }
  stats.mean /= tested;
  return stats;
}

TEST(Detect, RoundTripOnTextLikeConvexPolygons) {
  const auto stats = detect_round_trip(
      [](std::mt19937_64& rng, int draw) { return oracle::random_text_convex(rng, draw, 256, 256); });
  EXPECT_GE(stats.mean, 0.90);
  EXPECT_GE(stats.worst, 0.80);
}

// Compact shapes with few vertices sit outside what a constant extend ratio
// can invert, so detection is held to the exact-geometry rebuild instead.
TEST(Detect, IsotropicRoundTripTracksExactGeometry) {
  std::mt19937_64 rng(7);
  double mean = 0.0;
  int tested = 0;
  while (tested < 100) {
    const auto ring = oracle::random_convex(rng, 256, 256, 100, 100, 5, 12);
    if (ring.empty()) continue;
    const Polygon p(ring);
    const double d = offset_distance(p, 0.4);
    if (!(oracle::convex_inradius(ring) > 2.0 * d)) continue;
    const auto pieces = shrink_polygon(p, d);
    ASSERT_EQ(pieces.size(), 1u);
    const double rebuild = polygon_area(pieces[0]) * 1.5 / polygon_perimeter(pieces[0]);
    const double exact = polygon_iou(expand_polygon(pieces[0], rebuild), p);
    const auto dets = detect(map_from(rasterize(pieces[0], 512, 512)));
    ASSERT_EQ(dets.size(), 1u);
    const double iou = polygon_iou(dets[0].contour, p);
    EXPECT_GE(iou, exact - 0.04) << "shape " << tested;
    mean += iou;
    ++tested;
  }
  EXPECT_GE(mean / tested, 0.90);
}

TEST(Detect, Deterministic) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  ProbabilityMap pm(64, 64);
  for (float& v : pm.cells()) v = u(rng) > 0.3f ? u(rng) : 0.0f;
  PostprocConfig cfg;
  cfg.min_area = 1;
  cfg.min_score = 0.1;
  const auto a = detect(pm, cfg);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, detect(pm, cfg));
}

}  // namespace
}  // namespace ztd
