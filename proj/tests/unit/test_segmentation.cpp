// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "plantsam/error.hpp"
#include "plantsam/evaluation.hpp"
#include "plantsam/reference_segmenter.hpp"
#include "plantsam/segmentation.hpp"

namespace plantsam {
namespace {

class BoxOnly final : public Segmenter {
 public:
  SegmenterCapabilities capabilities() const override { return {true, false, 8}; }
  SegmentationResult segment(const RasterImage&, const PromptSet&) const override {
    return {BinaryMask(8, 8, true), 0.5};
  }
  std::string name() const override { return "box-only"; }
};

TEST(Upscale, NearestNeighbour) {
  BinaryMask m(2, 2);
  m.set(1, 0, true);
  const BinaryMask up = upscale_nearest(m, 4, 4);
  EXPECT_TRUE(up.get(2, 0));
  EXPECT_TRUE(up.get(3, 1));
  EXPECT_FALSE(up.get(1, 1));
  EXPECT_FALSE(up.get(3, 2));
  EXPECT_EQ(up.count(), 4u);
}

TEST(Clip, KeepsOnlyBoxUnion) {
  const BinaryMask m(10, 10, true);
  const std::vector<BoundingBox> boxes{{0, 0, 1, 1}, {8, 8, 9, 9}};
  EXPECT_EQ(clip_to_boxes(m, boxes).count(), 8u);
}

TEST(RunSegmenter, ResizesClipsAndChecksPrompts) {
  const RasterImage patch(32, 32, 3);
  PromptSet p;
  p.boxes.push_back({4, 4, 11, 11});
  const auto r = run_segmenter(BoxOnly{}, patch, p);
  EXPECT_EQ(r.mask.width(), 32);
  EXPECT_EQ(r.mask.count(), 64u);
  EXPECT_EQ(run_segmenter(BoxOnly{}, patch, p, false).mask.count(), 1024u);

  p.positive_points.push_back({1, 1});
  try {
    run_segmenter(BoxOnly{}, patch, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Unsupported);
  }
  const auto none = run_segmenter(BoxOnly{}, patch, PromptSet{});
  EXPECT_EQ(none.mask.count(), 0u);
  EXPECT_EQ(none.score, 0.0);
}

TEST(RunSegmenter, PointOutsidePatch) {
  const RasterImage patch(16, 16, 3);
  PromptSet p;
  p.positive_points.push_back({16, 3});
  EXPECT_THROW(run_segmenter(ReferenceSegmenter{}, patch, p), Error);
}

TEST(ReferenceSegmenter, BoxRecoversDarkDisc) {
  const auto fx = testing::two_blob();
  PromptSet p;
  p.boxes.push_back({25, 83, 115, 173});
  const auto r = run_segmenter(ReferenceSegmenter{}, fx.image, p);
  EXPECT_GT(iou(r.mask, fx.plant), 0.95);
}

TEST(ReferenceSegmenter, PointsAddAndRemoveRegions) {
  const auto fx = testing::two_blob();
  const ReferenceSegmenter seg;
  PromptSet plant;
  plant.positive_points.push_back(fx.plant_point);
  const auto a = run_segmenter(seg, fx.image, plant);
  EXPECT_GT(iou(a.mask, fx.plant), 0.95);

  PromptSet both = plant;
  both.positive_points.push_back(fx.artifact_point);
  const auto b = run_segmenter(seg, fx.image, both);
  EXPECT_GT(b.mask.count(), a.mask.count());

  PromptSet removed = both;
  removed.negative_points.push_back(fx.artifact_point);
  const auto c = run_segmenter(seg, fx.image, removed);
  EXPECT_EQ(c.mask, a.mask);
}

TEST(ReferenceSegmenter, Deterministic) {
  const auto fx = testing::two_blob();
  PromptSet p;
  p.boxes.push_back({10, 10, 240, 240});
  const ReferenceSegmenter seg;
  EXPECT_EQ(seg.segment(fx.image, p).mask, seg.segment(fx.image, p).mask);
}

TEST(ReferenceSegmenter, LowContrastBoxTakenWhole) {
  const RasterImage flat(40, 40, 3, 200);
  PromptSet p;
  p.boxes.push_back({5, 5, 14, 24});
  EXPECT_EQ(run_segmenter(ReferenceSegmenter{}, flat, p).mask.count(), 200u);
}

TEST(ReferenceSegmenter, ConfigValidation) {
  ReferenceSegmenterConfig c;
  c.seed_percentile = 1.5;
  EXPECT_THROW(ReferenceSegmenter{c}, Error);
  c = {};
  c.context_margin = -1;
  EXPECT_THROW(ReferenceSegmenter{c}, Error);
}

}  // namespace
}  // namespace plantsam
