// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <utility>
#include <string>
#include <vector>

#include "plantsam/image.hpp"

namespace plantsam {

/// Non-overlapping square grid over an image. Padding sits on the right and
/// bottom edges, so patch (0, 0) is aligned with image pixel (0, 0).
struct PatchPlan {
  int patch_size = 0;
  int cols = 0;
  int rows = 0;
  int pad_right = 0;
  int pad_bottom = 0;
  int source_width = 0;
  int source_height = 0;

  int patch_count() const { return cols * rows; }
  /// Row-major index of grid cell (row, col).
  int index(int row, int col) const { return row * cols + col; }
  Point origin(int row, int col) const { return {col * patch_size, row * patch_size}; }
  /// Image-space box of the non-padded part of cell (row, col).
  BoundingBox valid_region(int row, int col) const;
  /// Grid cell covering image pixel p.
  std::pair<int, int> cell_of(Point p) const;

  bool operator==(const PatchPlan&) const = default;
};

/// Patch side chosen from the image width alone: 1024 when width / 1024 > 3,
/// else 512 when width / 512 > 3, else 256. Comparisons are strict.
int select_patch_size(int width);

PatchPlan make_plan(int width, int height, int patch_size);

/// make_plan with the width-driven patch size.
PatchPlan plan_for(int width, int height);

template <typename Raster>
struct Tile {
  int grid_col = 0;
  int grid_row = 0;
  Raster pixels;
};

using Patch = Tile<RasterImage>;
using MaskPatch = Tile<BinaryMask>;

// Patches come back in row-major grid order. Padding is filled with 0.
std::vector<Patch> split(const RasterImage& image, const PatchPlan& plan);
std::vector<MaskPatch> split(const BinaryMask& mask, const PatchPlan& plan);

/// Reassembles per-patch masks (row-major, patch_size square) into a
/// source-sized mask, discarding padding.
BinaryMask stitch(std::span<const BinaryMask> masks, const PatchPlan& plan);
RasterImage stitch(std::span<const RasterImage> patches, const PatchPlan& plan);

std::string plan_to_json(const PatchPlan& plan);
PatchPlan plan_from_json(const std::string& text);

/// Writes `{image_id}_r{row}_c{col}.png` for every patch plus the
/// `{image_id}.plan.json` sidecar.
void write_patch_dump(const std::filesystem::path& dir, const std::string& image_id,
                      std::span<const Patch> patches, const PatchPlan& plan);

}  // namespace plantsam
