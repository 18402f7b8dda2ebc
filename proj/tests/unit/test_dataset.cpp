// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "plantsam/dataset.hpp"
#include "plantsam/error.hpp"

namespace plantsam {
namespace {

std::vector<std::string> numbered(int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("id" + std::to_string(i));
  return ids;
}

TEST(Yolo, Golden) {
  AnnotationRecord r{"x", {{0, 0, 255, 255}, {10, 20, 29, 59}}, 256};
  EXPECT_EQ(yolo_label(r),
            "0 0.500000 0.500000 1.000000 1.000000\n"
            "0 0.078125 0.156250 0.078125 0.156250\n");
  EXPECT_EQ(yolo_label({"e", {}, 256}), "");
}

TEST(Split, CountsForLargeAndSmallSets) {
  const auto big = split_ids(numbered(19078), {}, 42);
  EXPECT_EQ(big.train.size(), 14308u);
  EXPECT_EQ(big.val.size(), 3816u);
  EXPECT_EQ(big.test.size(), 954u);
  const auto small = split_ids(numbered(100), {}, 1);
  EXPECT_EQ(small.train.size(), 75u);
  EXPECT_EQ(small.val.size(), 20u);
  EXPECT_EQ(small.test.size(), 5u);
}

TEST(Split, PartitionIsDisjointSortedAndSeeded) {
  const auto ids = numbered(500);
  const auto a = split_ids(ids, {}, 7);
  std::set<std::string> seen;
  for (const auto* list : {&a.train, &a.val, &a.test}) {
    EXPECT_TRUE(std::is_sorted(list->begin(), list->end()));
    for (const auto& id : *list) EXPECT_TRUE(seen.insert(id).second);
  }
  EXPECT_EQ(seen.size(), 500u);
  EXPECT_EQ(split_ids(ids, {}, 7), a);
  auto reversed = ids;
  std::reverse(reversed.begin(), reversed.end());
  EXPECT_EQ(split_ids(reversed, {}, 7), a);
  EXPECT_NE(split_ids(ids, {}, 8).train, a.train);
  EXPECT_EQ(manifest_from_json(manifest_to_json(a)), a);
}

TEST(Split, Rejections) {
  EXPECT_THROW(split_ids(numbered(2), {}, 1), Error);
  EXPECT_THROW(split_ids(numbered(10), {0.5, 0.5, 0.0}, 1), Error);
  EXPECT_THROW(split_ids(numbered(10), {0.5, 0.3, 0.3}, 1), Error);
  EXPECT_THROW(split_ids({"a", "a", "b"}, {}, 1), Error);
}

RasterImage rendering(int w, int h) {
  RasterImage img(w, h, 3);
  for (int y = 20; y < 60; ++y)
    for (int x = 30; x < 290; ++x) img.at(x, y, 1) = 120;
  return img;
}

TEST(Build, BoxesAreClippedPerPatch) {
  const std::vector<SegmentedImage> imgs{{"s1", rendering(300, 100)}};
  DatasetConfig cfg;
  cfg.morphology.passes = 0;
  const auto patches = build_detection_dataset(imgs, cfg);
  ASSERT_EQ(patches.size(), 2u);
  EXPECT_EQ(patches[0].annotation.patch_id, "s1_r0_c0");
  ASSERT_EQ(patches[0].annotation.boxes.size(), 1u);
  EXPECT_TRUE(patches[0].annotation.boxes[0].same_extent({30, 20, 255, 59}));
  ASSERT_EQ(patches[1].annotation.boxes.size(), 1u);
  EXPECT_TRUE(patches[1].annotation.boxes[0].same_extent({0, 20, 33, 59}));
  EXPECT_EQ(patches[1].origin, (Point{256, 0}));
}

TEST(Build, NegativesAndDuplicates) {
  const std::vector<SegmentedImage> imgs{{"b", RasterImage(300, 100, 3)},
                                         {"a", rendering(300, 100)}};
  DatasetConfig cfg;
  cfg.morphology.passes = 0;
  EXPECT_EQ(build_detection_dataset(imgs, cfg).size(), 4u);
  EXPECT_EQ(build_detection_dataset(imgs, cfg)[0].image_id, "a");
  cfg.keep_negatives = false;
  EXPECT_EQ(build_detection_dataset(imgs, cfg).size(), 2u);
  const std::vector<SegmentedImage> dup{{"a", rendering(300, 100)}, {"a", rendering(300, 100)}};
  EXPECT_THROW(build_detection_dataset(dup, cfg), Error);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Write, ByteIdenticalAcrossRuns) {
  std::vector<SegmentedImage> imgs;
  for (int i = 0; i < 4; ++i) imgs.push_back({"img" + std::to_string(i), rendering(300, 100)});
  DatasetConfig cfg;
  const auto patches = build_detection_dataset(imgs, cfg);
  std::vector<std::string> ids;
  for (const auto& p : patches) ids.push_back(p.annotation.patch_id);
  const auto manifest = split_ids(ids, {}, 3);
  const auto a = testing::scratch_dir("ds_a");
  const auto b = testing::scratch_dir("ds_b");
  write_dataset(a, patches, manifest);
  write_dataset(b, build_detection_dataset(imgs, cfg), split_ids(ids, {}, 3));
  std::size_t files = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++files;
    const auto rel = std::filesystem::relative(e.path(), a);
    EXPECT_EQ(slurp(e.path()), slurp(b / rel)) << rel;
  }
  EXPECT_EQ(files, 2 * patches.size() + 1);
  EXPECT_TRUE(std::filesystem::exists(a / "splits.json"));
}

}  // namespace
}  // namespace plantsam
