// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "plantsam/components.hpp"
#include "plantsam/error.hpp"
#include "plantsam/reference_kernels.hpp"

namespace plantsam {
namespace {

std::vector<testing::OracleComponent> library(const BinaryMask& m, Connectivity c) {
  std::vector<testing::OracleComponent> out;
  for (const auto& cc : connected_components(m, c)) out.push_back({cc.bbox, cc.pixel_count});
  return testing::canonical(std::move(out));
}

TEST(Components, TwoSeparatedSquares) {
  BinaryMask m(20, 10);
  testing::fill_rect(m, 1, 1, 4, 4);
  testing::fill_rect(m, 10, 2, 15, 8);
  const auto cc = connected_components(m);
  ASSERT_EQ(cc.size(), 2u);
  EXPECT_TRUE(cc[0].bbox.same_extent({1, 1, 4, 4}));
  EXPECT_TRUE(cc[1].bbox.same_extent({10, 2, 15, 8}));
  EXPECT_EQ(cc[1].pixel_count, 42u);
}

TEST(Components, DiagonalTouchDependsOnConnectivity) {
  BinaryMask m(4, 4);
  m.set(0, 0, true);
  m.set(1, 1, true);
  EXPECT_EQ(connected_components(m, Connectivity::Eight).size(), 1u);
  EXPECT_EQ(connected_components(m, Connectivity::Four).size(), 2u);
}

TEST(Components, LabelsAreRowMajorFirstEncounter) {
  BinaryMask m(5, 3);
  m.set(4, 0, true);
  m.set(0, 2, true);
  const auto labels = label_components(m);
  EXPECT_EQ(labels.at(4, 0), 1);
  EXPECT_EQ(labels.at(0, 2), 2);
  EXPECT_EQ(labels.at(2, 1), 0);
}

TEST(Components, MatchRelaxationOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 80; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 48);
    const int h = 1 + static_cast<int>(rng() % 48);
    const BinaryMask m = testing::random_mask(w, h, 0.2 + 0.5 * (trial % 5) / 5.0, rng);
    for (auto c : {Connectivity::Four, Connectivity::Eight}) {
      ASSERT_EQ(library(m, c), testing::relaxation_components(m, c))
          << "trial " << trial << " connectivity " << static_cast<int>(c);
    }
  }
}

TEST(Components, EmptyAndFull) {
  EXPECT_TRUE(connected_components(BinaryMask(7, 7)).empty());
  const auto cc = connected_components(BinaryMask(7, 5, true));
  ASSERT_EQ(cc.size(), 1u);
  EXPECT_TRUE(cc[0].bbox.same_extent({0, 0, 6, 4}));
}

TEST(Components, ParseConnectivity) {
  EXPECT_EQ(parse_connectivity(4), Connectivity::Four);
  EXPECT_EQ(parse_connectivity(8), Connectivity::Eight);
  EXPECT_THROW(parse_connectivity(6), Error);
}

TEST(NonBlack, ThresholdOnBrightestChannel) {
  RasterImage img(3, 1, 3);
  img.at(1, 0, 2) = 5;
  img.at(2, 0, 0) = 6;
  const BinaryMask m = mask_from_nonblack(img, 5);
  EXPECT_FALSE(m.get(0, 0));
  EXPECT_FALSE(m.get(1, 0));
  EXPECT_TRUE(m.get(2, 0));
  EXPECT_TRUE(mask_from_nonblack(img).get(1, 0));
  EXPECT_THROW(mask_from_nonblack(img, 256), Error);
}

TEST(NonBlack, MatchesSerialReference) {
  std::mt19937_64 rng(2);
  RasterImage img(64, 33, 3);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng() % 4 == 0 ? 0 : rng() % 40);
  for (int t : {0, 10, 30}) EXPECT_EQ(mask_from_nonblack(img, t), reference::mask_from_nonblack(img, t));
}

}  // namespace
}  // namespace plantsam
