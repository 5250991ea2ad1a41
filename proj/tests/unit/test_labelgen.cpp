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

#include "label_oracle.hpp"
#include "oracles.hpp"
#include "ztd/labelgen.hpp"

namespace ztd {
namespace {

SceneSample scene(int w, int h, std::vector<Annotation> anns) {
  return SceneSample{w, h, std::move(anns)};
}

Annotation text(Polygon p) { return {std::move(p), "text", false}; }
Annotation dont_care(Polygon p) { return {std::move(p), "###", true}; }

// Random scene of text-like convex instances and the occasional dont-care.
SceneSample random_scene(std::mt19937_64& rng, int size = 160) {
  std::uniform_int_distribution<int> count(0, 4);
  std::uniform_real_distribution<double> pos(30.0, size - 30.0);
  std::uniform_real_distribution<double> radius(6.0, 28.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  SceneSample s{size, size, {}};
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    auto ring = oracle::random_convex(rng, pos(rng), pos(rng), radius(rng), radius(rng) * 0.4, 4, 9);
    if (coin(rng) < 0.2) s.annotations.push_back(dont_care(Polygon(ring)));
    else s.annotations.push_back(text(Polygon(ring)));
  }
  return s;
}

TEST(ScaledExtent, CeilingDivision) {
  EXPECT_EQ(scaled_extent(160, LabelScale::sixteenth), 10);
  EXPECT_EQ(scaled_extent(161, LabelScale::sixteenth), 11);
  EXPECT_EQ(scaled_extent(101, LabelScale::quarter), 26);
  EXPECT_EQ(scaled_extent(7, LabelScale::full), 7);
}

TEST(GenShrinkLabels, SquareAtFullScale) {
  const auto labels = gen_shrink_labels(scene(100, 100, {text(make_rectangle(0, 0, 100, 100))}), 0.4);
  EXPECT_EQ(labels.mask, to_tristate(rasterize(make_rectangle(21, 21, 79, 79), 100, 100)));
  EXPECT_EQ(count(labels.mask, Tri::pos), 58u * 58u);
  ASSERT_EQ(labels.instances.size(), 1u);
  EXPECT_NEAR(labels.instances[0].distance, 21.0, 1e-12);
  EXPECT_EQ(labels.instances[0].shrink.size(), 1u);
}

TEST(GenShrinkLabels, SquareAtQuarterScale) {
  const auto labels = gen_shrink_labels(scene(100, 100, {text(make_rectangle(0, 0, 100, 100))}), 0.4,
                                        LabelScale::quarter);
  ASSERT_EQ(labels.mask.height(), 25);
  EXPECT_EQ(labels.mask, to_tristate(rasterize(make_rectangle(5.25, 5.25, 19.75, 19.75), 25, 25)));
  // Centres 5.5 .. 19.5 along each axis.
  EXPECT_EQ(count(labels.mask, Tri::pos), 15u * 15u);
}

TEST(GenShrinkLabels, DontCareOnlyIsIgnoredUnshrunk) {
  const auto labels = gen_shrink_labels(scene(20, 20, {dont_care(make_rectangle(2, 2, 10, 6))}));
  EXPECT_EQ(count(labels.mask, Tri::pos), 0u);
  EXPECT_EQ(count(labels.mask, Tri::ign), 8u * 4u);
  EXPECT_TRUE(labels.instances[0].shrink.empty());
}

TEST(GenShrinkLabels, VanishedInstanceIsRecordedButContributesNothing) {
  // Triangle so small that its shrink falls under the 1 px^2 cut-off.
  const auto labels = gen_shrink_labels(scene(10, 10, {text(Polygon({{1, 1}, {3, 1}, {1, 3}}))}));
  ASSERT_EQ(labels.instances.size(), 1u);
  EXPECT_TRUE(labels.instances[0].shrink.empty());
  EXPECT_EQ(count(labels.mask, Tri::pos), 0u);
}

TEST(GenShrinkLabels, RatioValidated) {
  EXPECT_THROW(gen_shrink_labels(scene(10, 10, {}), 0.0), ParameterError);
  EXPECT_THROW(gen_margin_label(scene(10, 10, {}), 1.2), ParameterError);
}

TEST(GenCoarseLabel, Examples) {
  // Shrink piece (6.72, 6.72)-(25.28, 25.28) -> 1/16 coordinates 0.42 .. 1.58.
  const auto coarse = gen_coarse_label(scene(32, 32, {text(make_rectangle(0, 0, 32, 32))}));
  EXPECT_EQ(coarse, TriStateMask(2, 2, Tri::pos));
  EXPECT_EQ(gen_coarse_label(scene(64, 48, {})), TriStateMask(3, 4, Tri::neg));
  const auto big = gen_coarse_label(scene(160, 160, {}));
  EXPECT_EQ(big.height(), 10);
  EXPECT_EQ(big.width(), 10);
}

TEST(GenCoarseLabel, AgreesWithDownsampledFullResolutionUpToBoundary) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const SceneSample s = random_scene(rng, 256);
    const TriStateMask full = gen_shrink_labels(s).mask;
    const TriStateMask coarse = gen_coarse_label(s);
    // Downsample by sampling the full-resolution cell containing the coarse
    // cell centre (16c + 8, 16r + 8).
    double perimeter = 0.0;
    for (const auto& rec : gen_shrink_labels(s).instances) {
      for (const Polygon& piece : rec.shrink) perimeter += polygon_perimeter(piece);
      if (rec.dontcare) perimeter += polygon_perimeter(rec.original);
    }
    std::size_t mismatches = 0;
    for (int r = 0; r < coarse.height(); ++r) {
      for (int c = 0; c < coarse.width(); ++c) {
        if (full.at(16 * r + 8, 16 * c + 8) != coarse.at(r, c)) ++mismatches;
      }
    }
    EXPECT_LE(static_cast<double>(mismatches), perimeter / 16.0 + 4.0) << "trial " << trial;
  }
}

TEST(GenMarginLabel, SquareText) {
  // d1 = 21 -> S1 (21, 79); d2 = 3364 * 0.84 / 232 -> S2 (33.18, 66.82).
  // Quarter grid 30x30: text cells 0..24, S1 cells 5..19, S2 cells 8..16.
  const TriStateMask m = gen_margin_label(scene(120, 120, {text(make_rectangle(0, 0, 100, 100))}));
  ASSERT_EQ(m.height(), 30);
  EXPECT_EQ(count(m, Tri::pos), 15u * 15u - 9u * 9u);
  EXPECT_EQ(count(m, Tri::neg), 25u * 25u - 15u * 15u);
  EXPECT_EQ(count(m, Tri::ign), 900u - 625u + 81u);
  EXPECT_EQ(m.at(12, 12), Tri::ign);  // S2 interior
  EXPECT_EQ(m.at(6, 12), Tri::pos);   // band between S2 and S1
  EXPECT_EQ(m.at(2, 12), Tri::neg);   // margin between S1 and text
  EXPECT_EQ(m.at(27, 27), Tri::ign);  // background
  const auto oracle = oracle::margin_oracle(scene(120, 120, {text(make_rectangle(0, 0, 100, 100))}), 0.4);
  EXPECT_EQ(m, oracle.expected);
}

TEST(GenMarginLabel, EmptySceneIsAllIgnored) {
  EXPECT_EQ(gen_margin_label(scene(40, 24, {})), TriStateMask(6, 10, Tri::ign));
}

TEST(GenMarginLabel, VanishedInnerShrinkLeavesWholeS1Positive) {
  // Thin text: S1 is about 3.2 x 1 px, so S2 falls under the 1 px^2 cut-off.
  const Polygon thin = make_rectangle(4.0, 4.87, 8.46, 7.13);
  const auto s1 = shrink_polygon(thin, offset_distance(thin, 0.4));
  ASSERT_EQ(s1.size(), 1u);
  ASSERT_TRUE(shrink_polygon(s1[0], offset_distance(s1[0], 0.4)).empty());

  const SceneSample s = scene(16, 16, {text(thin)});
  const TriStateMask m = gen_margin_label(s);
  const BinaryMask s1_quarter = rasterize(s1[0].scaled(0.25), 4, 4);
  const BinaryMask text_quarter = rasterize(thin.scaled(0.25), 4, 4);
  ASSERT_GT(count(s1_quarter, std::uint8_t{1}), 0u);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (s1_quarter.at(r, c)) EXPECT_EQ(m.at(r, c), Tri::pos);
      else if (text_quarter.at(r, c)) EXPECT_EQ(m.at(r, c), Tri::neg);
      else EXPECT_EQ(m.at(r, c), Tri::ign);
    }
  }
}

TEST(GenMarginLabel, MatchesSetIdentityOracleOnRandomScenes) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const SceneSample s = random_scene(rng);
    const TriStateMask m = gen_margin_label(s);
    const auto oracle = oracle::margin_oracle(s, 0.4);
    for (int r = 0; r < m.height(); ++r) {
      for (int c = 0; c < m.width(); ++c) {
        if (oracle.boundary.at(r, c)) continue;
        ASSERT_EQ(m.at(r, c), oracle.expected.at(r, c)) << "trial " << trial << " cell " << r << "," << c;
      }
    }
  }
}

TEST(GenLabelSet, RemovingDontCareOnlyChangesIgnoredCells) {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    SceneSample s = random_scene(rng);
    SceneSample without = s;
    std::erase_if(without.annotations, [](const Annotation& a) { return a.dontcare; });
    if (without.annotations.size() == s.annotations.size()) continue;
    const LabelSet with_dc = gen_label_set(s);
    const LabelSet no_dc = gen_label_set(without);
    const auto check = [](const TriStateMask& a, const TriStateMask& b) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.cells()[i] != Tri::ign) EXPECT_EQ(a.cells()[i], b.cells()[i]);
      }
    };
    check(with_dc.shrink_full, no_dc.shrink_full);
    check(with_dc.shrink_quarter, no_dc.shrink_quarter);
    check(with_dc.coarse, no_dc.coarse);
    check(with_dc.margin, no_dc.margin);
    ++checked;
  }
  EXPECT_GT(checked, 5);
}

TEST(GenLabelSet, ConsistentWithIndividualGenerators) {
  std::mt19937_64 rng(13);
  const SceneSample s = random_scene(rng, 200);
  const LabelSet set = gen_label_set(s);
  EXPECT_EQ(set.shrink_full, gen_shrink_labels(s).mask);
  EXPECT_EQ(set.shrink_quarter, gen_shrink_labels(s, 0.4, LabelScale::quarter).mask);
  EXPECT_EQ(set.coarse, gen_coarse_label(s));
  EXPECT_EQ(set.margin, gen_margin_label(s));
  // Quarter-scale POS set is the rasterization of the scaled shrink pieces.
  BinaryMask expected(set.shrink_quarter.height(), set.shrink_quarter.width(), 0);
  for (const auto& rec : set.instances) {
    for (const Polygon& piece : rec.shrink) fill_polygon(expected, piece.scaled(0.25), std::uint8_t{1});
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (set.shrink_quarter.cells()[i] != Tri::ign) {
      EXPECT_EQ(set.shrink_quarter.cells()[i] == Tri::pos, expected.cells()[i] == 1);
    }
  }
}

}  // namespace
}  // namespace ztd
