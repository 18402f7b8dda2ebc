// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "plantsam/detectors.hpp"
#include "plantsam/error.hpp"

namespace plantsam {
namespace {

TEST(OracleDetector, OneBoxPerComponentInPatchCoordinates) {
  BinaryMask truth(200, 100);
  testing::fill_rect(truth, 110, 10, 129, 29);
  testing::fill_rect(truth, 160, 50, 189, 89);
  const MaskOracleDetector det(truth);
  const RasterImage pixels(100, 100, 3);
  const PatchView view{pixels, 0, 1, {100, 0}, 100, 100};
  const auto boxes = det.detect(view);
  ASSERT_EQ(boxes.size(), 2u);
  EXPECT_TRUE(boxes[0].same_extent({10, 10, 29, 29}));
  EXPECT_TRUE(boxes[1].same_extent({60, 50, 89, 89}));

  const PatchView left{pixels, 0, 0, {0, 0}, 100, 100};
  EXPECT_TRUE(det.detect(left).empty());
}

TEST(OracleDetector, EmptyMaskRejected) {
  EXPECT_THROW(MaskOracleDetector(BinaryMask{}), Error);
}

TEST(FinalizeBoxes, ClampsAndFilters) {
  const RasterImage pixels(64, 64, 3);
  const PatchView view{pixels, 0, 0, {0, 0}, 40, 30};
  const auto out = finalize_boxes(
      {{-5, -5, 50, 50, 0.9}, {45, 0, 60, 10, 0.9}, {0, 0, 4, 4, 0.1}}, view, 0.25);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(out[0].same_extent({0, 0, 39, 29}));
}

TEST(HeuristicDetector, FindsPlantOnSheet) {
  const auto fx = testing::two_blob();
  const HeuristicDetector det;
  const auto boxes = det.detect(fx.image);
  ASSERT_FALSE(boxes.empty());
  bool plant_boxed = false;
  for (const auto& b : boxes) plant_boxed |= b.contains(fx.plant_point);
  EXPECT_TRUE(plant_boxed);
}

TEST(HeuristicDetector, BlankPaperHasNoBoxes) {
  const RasterImage blank = testing::paper(256, 256, 4);
  EXPECT_TRUE(HeuristicDetector().detect(blank).empty());
}

TEST(HeuristicDetector, RejectsBadConfig) {
  EXPECT_THROW(HeuristicDetector({300, 1}), Error);
  EXPECT_THROW(HeuristicDetector({40, -1}), Error);
}

}  // namespace
}  // namespace plantsam
