// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "plantsam/image.hpp"

namespace plantsam {

/// Square structuring element of side 2 * radius + 1.
struct StructuringElement {
  int radius = 1;

  static StructuringElement square(int radius);
  int side() const { return 2 * radius + 1; }
};

/// Erosion/dilation settings for image preprocessing. `passes` erosions are
/// followed by the same number of dilations; zero passes disables the step.
struct MorphologyConfig {
  StructuringElement element{};
  int passes = 1;
};

// Pixels outside the raster count as background (0) for both operations, so
// erosion shrinks regions that touch the border. Color images are filtered
// per channel.
BinaryMask erode(const BinaryMask& mask, StructuringElement se = {});
BinaryMask dilate(const BinaryMask& mask, StructuringElement se = {});
RasterImage erode(const RasterImage& image, StructuringElement se = {});
RasterImage dilate(const RasterImage& image, StructuringElement se = {});

BinaryMask opening(const BinaryMask& mask, StructuringElement se = {});

/// Erosion passes followed by dilation passes, as used before patching.
RasterImage preprocess(const RasterImage& image, const MorphologyConfig& config);
BinaryMask preprocess(const BinaryMask& mask, const MorphologyConfig& config);

}  // namespace plantsam
