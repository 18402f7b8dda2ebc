// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "plantsam/error.hpp"
#include "plantsam/image_io.hpp"

namespace plantsam {
namespace {

class ImageIo : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::scratch_dir("image_io"); }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(ImageIo, PngRoundTripColor) {
  const RasterImage img = testing::paper(37, 21, 5);
  save_png(dir_ / "a" / "b.png", img);
  EXPECT_EQ(load_image(dir_ / "a" / "b.png"), img);
}

TEST_F(ImageIo, PngRoundTripGray) {
  RasterImage img(5, 4, 1);
  for (int i = 0; i < 20; ++i) img.data()[i] = static_cast<std::uint8_t>(i * 12);
  EXPECT_EQ(decode_image(encode_png(img)), img);
}

TEST_F(ImageIo, MaskIsNormalizedOnRead) {
  RasterImage raw(3, 1, 1);
  raw.at(0, 0) = 0;
  raw.at(1, 0) = 1;
  raw.at(2, 0) = 200;
  save_png(dir_ / "m.png", raw);
  const BinaryMask m = load_mask(dir_ / "m.png");
  EXPECT_FALSE(m.get(0, 0));
  EXPECT_TRUE(m.get(1, 0));
  EXPECT_TRUE(m.get(2, 0));

  save_mask(dir_ / "n.png", m);
  const RasterImage stored = load_image(dir_ / "n.png");
  EXPECT_EQ(stored.channels(), 1);
  EXPECT_EQ(stored.at(1, 0), 255);
}

TEST_F(ImageIo, JpegLoads) {
  const RasterImage img = load_image(std::filesystem::path(PLANTSAM_TEST_DATA) / "images" / "uniform128.jpg");
  EXPECT_EQ(img, RasterImage(16, 16, 3, 128));
}

TEST_F(ImageIo, Errors) {
  try {
    load_image(dir_ / "missing.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotFound);
  }
  std::ofstream(dir_ / "junk.png") << "not an image";
  EXPECT_THROW(load_image(dir_ / "junk.png"), Error);
}

}  // namespace
}  // namespace plantsam
