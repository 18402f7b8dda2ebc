// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "plantsam/error.hpp"
#include "plantsam/model_adapters.hpp"

namespace plantsam {
namespace {

const std::filesystem::path kOnnx = std::filesystem::path(PLANTSAM_TEST_DATA) / "onnx";

TEST(InputTensor, ConstantsLayout) {
  RasterImage img(2, 2, 3);
  img.at(1, 0, 0) = 255;
  img.at(0, 1, 2) = 51;
  const auto t = make_input_tensor(img, 2, InputNormalization{});
  ASSERT_EQ(t.size(), 12u);
  EXPECT_FLOAT_EQ(t[1], 1.0f);
  EXPECT_FLOAT_EQ(t[8 + 2], 0.2f);
  EXPECT_FLOAT_EQ(t[4], 0.0f);
}

TEST(InputTensor, PerPatchStandardizes) {
  RasterImage img(4, 1, 3);
  for (int x = 0; x < 4; ++x) img.at(x, 0, 0) = static_cast<std::uint8_t>(x * 10);
  InputNormalization norm;
  norm.mode = InputNormalization::Mode::PerPatch;
  const auto t = make_input_tensor(img, 4, norm);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) sum += t[static_cast<std::size_t>(i)];
  EXPECT_NEAR(sum, 0.0, 1e-5);
  EXPECT_LT(t[0], 0.0f);
}

TEST(DecodeDetections, ScalesToPatchPixels) {
  const float rows[] = {0.f, 0.f, 32.f, 16.f, 0.8f, 0.f,
                        1.f, 1.f, 1.f,  1.f,  0.9f, 0.f};
  const auto boxes = decode_detections(rows, 2, 6, 64, 128, 128);
  ASSERT_EQ(boxes.size(), 1u);
  EXPECT_TRUE(boxes[0].same_extent({0, 0, 63, 31}));
  EXPECT_FLOAT_EQ(static_cast<float>(boxes[0].confidence), 0.8f);
}

TEST(EncodePrompts, OneCallPerBox) {
  PromptSet p;
  p.boxes.push_back({0, 0, 9, 9});
  p.boxes.push_back({10, 10, 19, 19});
  p.positive_points.push_back({4, 4});
  const auto calls = encode_prompts(p, 20, 40, true);
  ASSERT_EQ(calls.size(), 2u);
  EXPECT_EQ(calls[0].labels, (std::vector<float>{1.f, 2.f, 3.f}));
  EXPECT_EQ(calls[0].coords, (std::vector<float>{9.f, 9.f, 0.f, 0.f, 20.f, 20.f}));
  EXPECT_FLOAT_EQ(calls[1].coords[2], 20.f);
}

TEST(EncodePrompts, PointsOnlyArePadded) {
  PromptSet p;
  p.negative_points.push_back({1, 1});
  const auto calls = encode_prompts(p, 10, 10, true);
  ASSERT_EQ(calls.size(), 1u);
  EXPECT_EQ(calls[0].labels, (std::vector<float>{0.f, -1.f}));
  EXPECT_TRUE(encode_prompts(PromptSet{}, 10, 10, true).empty());
}

TEST(ModelDetector, TinyExport) {
  const ModelDetector det(DetectorAdapterConfig::load(kOnnx / "tiny_detector.json"));
  const RasterImage patch(64, 64, 3, 100);
  const auto boxes = det.detect(patch);
  ASSERT_EQ(boxes.size(), 1u);
  EXPECT_TRUE(boxes[0].same_extent({8, 8, 39, 39}));
  EXPECT_NEAR(boxes[0].confidence, 0.9, 1e-6);
}

TEST(ModelSegmenter, TinyExportSegmentsDarkHalf) {
  const ModelSegmenter seg(SegmenterAdapterConfig::load(kOnnx / "tiny_segmenter.json"));
  EXPECT_EQ(seg.capabilities().native_mask_resolution, 16);
  RasterImage patch(64, 64, 3, 255);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 32; ++x)
      for (int c = 0; c < 3; ++c) patch.at(x, y, c) = 0;
  PromptSet p;
  p.boxes.push_back({0, 0, 63, 63});
  const auto r = run_segmenter(seg, patch, p);
  EXPECT_EQ(r.mask.count(), 32u * 64u);
  EXPECT_TRUE(r.mask.get(0, 0));
  EXPECT_FALSE(r.mask.get(63, 0));

  PromptSet point;
  point.positive_points.push_back({5, 5});
  EXPECT_EQ(run_segmenter(seg, patch, point).mask.count(), 32u * 64u);
}

TEST(ModelAdapters, MissingFilesReported) {
  EXPECT_THROW(DetectorAdapterConfig::load(kOnnx / "absent.json"), Error);
  DetectorAdapterConfig cfg;
  cfg.model = kOnnx / "absent.onnx";
  EXPECT_THROW(ModelDetector{cfg}, Error);
  const auto dir = testing::scratch_dir("adapters");
  std::ofstream(dir / "bad.json") << "{\"encoder\": 3}";
  EXPECT_THROW(SegmenterAdapterConfig::load(dir / "bad.json"), Error);
}

TEST(ModelAdapters, BareOnnxPathUsesDefaults) {
  const auto cfg = DetectorAdapterConfig::load(kOnnx / "tiny_detector.onnx");
  EXPECT_EQ(cfg.model, kOnnx / "tiny_detector.onnx");
  EXPECT_EQ(cfg.input_size, 640);
}

}  // namespace
}  // namespace plantsam
