// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "plantsam/components.hpp"
#include "plantsam/image.hpp"

// Naive test oracles, independent of the library code.
namespace plantsam::testing {

/// Set definition: a pixel survives erosion iff every pixel of its
/// (2r+1)^2 window is inside the image and set.
BinaryMask brute_erode(const BinaryMask& m, int r);
/// A pixel is set after dilation iff any in-image pixel of its window is set.
BinaryMask brute_dilate(const BinaryMask& m, int r);

struct OracleComponent {
  BoundingBox box;
  std::size_t pixels = 0;

  bool operator==(const OracleComponent& o) const {
    return box.same_extent(o.box) && pixels == o.pixels;
  }
};

/// Iterated minimum-label relaxation until a fixed point. Components are
/// returned sorted by (y_min, x_min, y_max, x_max, pixels).
std::vector<OracleComponent> relaxation_components(const BinaryMask& m, Connectivity c);

/// Same ordering applied to library output for comparison.
std::vector<OracleComponent> canonical(std::vector<OracleComponent> v);

struct PixelCounts {
  double intersection = 0;
  double pred = 0;
  double truth = 0;
  double unite = 0;
};
PixelCounts count_pixels(const BinaryMask& pred, const BinaryMask& truth);
double brute_iou(const BinaryMask& pred, const BinaryMask& truth);
double brute_dice(const BinaryMask& pred, const BinaryMask& truth);

}  // namespace plantsam::testing
