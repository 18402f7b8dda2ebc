// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Serial versions of the data-parallel kernels, used by the equivalence tests
// and the benchmark. The pipeline does not call them.

#include <cstddef>
#include <span>
#include <vector>

#include "plantsam/image.hpp"
#include "plantsam/morphology.hpp"

namespace plantsam {
struct PatchPlan;
}

namespace plantsam::reference {

BinaryMask erode(const BinaryMask& mask, StructuringElement se);
BinaryMask dilate(const BinaryMask& mask, StructuringElement se);
RasterImage erode(const RasterImage& image, StructuringElement se);
RasterImage dilate(const RasterImage& image, StructuringElement se);

BinaryMask mask_from_nonblack(const RasterImage& image, int threshold);

struct OverlapCounts {
  std::size_t intersection = 0;
  std::size_t predicted = 0;
  std::size_t truth = 0;
};
OverlapCounts overlap_counts(const BinaryMask& pred, const BinaryMask& truth);

std::vector<BinaryMask> split(const BinaryMask& mask, const PatchPlan& plan);
BinaryMask stitch(std::span<const BinaryMask> masks, const PatchPlan& plan);

}  // namespace plantsam::reference
