// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "plantsam/image.hpp"
#include "plantsam/morphology.hpp"
#include "plantsam/prompting.hpp"

namespace plantsam {

struct DatasetConfig {
  MorphologyConfig morphology{};
  /// A pixel is plant when any channel exceeds this value.
  int nonblack_threshold = 0;
  /// min_component_pixels and connectivity are used; the threshold is not.
  DetectorConfig detector{};
  /// Keep patches without any box as negative examples.
  bool keep_negatives = true;
};

struct AnnotationRecord {
  std::string patch_id;
  std::vector<BoundingBox> boxes;
  int patch_size = 0;
};

struct DatasetPatch {
  std::string image_id;
  int grid_row = 0;
  int grid_col = 0;
  /// Image-space position of patch pixel (0, 0).
  Point origin{};
  RasterImage pixels;
  AnnotationRecord annotation;
};

/// A segmentation rendering: plant pixels on a black background.
struct SegmentedImage {
  std::string image_id;
  RasterImage image;
};

/// `{image_id}_r{row}_c{col}`.
std::string patch_id(const std::string& image_id, int row, int col);

/// Patches every image with the width-driven plan and boxes each patch's
/// non-black components. Output is ordered by image id, then grid row and
/// column. Boxes crossing a patch border are clipped per patch.
std::vector<DatasetPatch> build_detection_dataset(std::span<const SegmentedImage> images,
                                                  const DatasetConfig& config);

/// One `0 cx cy w h` line per box, normalized by the patch size, six decimals.
std::string yolo_label(const AnnotationRecord& record);

struct SplitRatios {
  double train = 0.75;
  double val = 0.20;
  double test = 0.05;
};

struct SplitManifest {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
  std::uint64_t seed = 0;

  bool operator==(const SplitManifest&) const = default;
};

/// Ids are sorted and must be unique. Seeded Fisher-Yates shuffle, then a proportional partition: each split
/// gets floor(n * ratio) and the leftover ids go to the largest fractional
/// remainders (earlier split wins ties). Each list is sorted.
SplitManifest split_ids(std::vector<std::string> ids, SplitRatios ratios, std::uint64_t seed);

std::string manifest_to_json(const SplitManifest& manifest);
SplitManifest manifest_from_json(const std::string& text);

/// images/{split}/{id}.png, labels/{split}/{id}.txt and splits.json under root.
void write_dataset(const std::filesystem::path& root, std::span<const DatasetPatch> patches,
                   const SplitManifest& manifest);

}  // namespace plantsam
