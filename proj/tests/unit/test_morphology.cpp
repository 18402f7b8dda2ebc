// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "plantsam/error.hpp"
#include "plantsam/morphology.hpp"
#include "plantsam/reference_kernels.hpp"

namespace plantsam {
namespace {

TEST(Morphology, MatchesBruteForceOnRandomMasks) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 40);
    const int h = 1 + static_cast<int>(rng() % 40);
    const int r = 1 + static_cast<int>(rng() % 3);
    const BinaryMask m = testing::random_mask(w, h, 0.55, rng);
    const auto se = StructuringElement::square(r);
    ASSERT_EQ(erode(m, se), testing::brute_erode(m, r)) << w << "x" << h << " r" << r;
    ASSERT_EQ(dilate(m, se), testing::brute_dilate(m, r)) << w << "x" << h << " r" << r;
    ASSERT_EQ(reference::erode(m, se), erode(m, se));
    ASSERT_EQ(reference::dilate(m, se), dilate(m, se));
  }
}

TEST(Morphology, ColorChannelsFilteredIndependently) {
  std::mt19937_64 rng(5);
  RasterImage img(19, 13, 3);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng());
  const auto se = StructuringElement::square(2);
  const RasterImage e = erode(img, se);
  const RasterImage d = dilate(img, se);
  EXPECT_EQ(e, reference::erode(img, se));
  EXPECT_EQ(d, reference::dilate(img, se));
  // Window minimum of channel 1 at an interior pixel.
  int lo = 255;
  for (int y = 4; y <= 8; ++y) {
    for (int x = 5; x <= 9; ++x) lo = std::min<int>(lo, img.at(x, y, 1));
  }
  EXPECT_EQ(e.at(7, 6, 1), lo);
}

TEST(Morphology, OpeningRemovesSpecksKeepsBodies) {
  BinaryMask m(40, 40);
  testing::fill_rect(m, 5, 5, 25, 25);
  m.set(35, 35, true);
  m.set(36, 35, true);
  const BinaryMask o = opening(m);
  EXPECT_FALSE(o.get(35, 35));
  EXPECT_TRUE(o.get(5, 5));
  EXPECT_TRUE(o.get(25, 25));
  EXPECT_EQ(o.count(), 21u * 21u);
}

TEST(Morphology, OpeningIsAntiExtensiveAndIdempotent) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const BinaryMask m = testing::blob_mask(50, 30, 6, rng);
    const BinaryMask o = opening(m);
    EXPECT_TRUE(is_subset(o, m));
    EXPECT_EQ(opening(o), o);
  }
}

TEST(Morphology, PreprocessPasses) {
  BinaryMask m(30, 30);
  testing::fill_rect(m, 10, 10, 13, 13);
  MorphologyConfig none{StructuringElement::square(1), 0};
  EXPECT_EQ(preprocess(m, none), m);
  MorphologyConfig twice{StructuringElement::square(1), 2};
  EXPECT_FALSE(preprocess(m, twice).any());
  EXPECT_EQ(preprocess(m, MorphologyConfig{}), m);
}

TEST(Morphology, RejectsBadElement) {
  EXPECT_THROW(StructuringElement::square(0), Error);
  EXPECT_THROW(preprocess(BinaryMask(3, 3), MorphologyConfig{StructuringElement{}, -1}), Error);
}

}  // namespace
}  // namespace plantsam
