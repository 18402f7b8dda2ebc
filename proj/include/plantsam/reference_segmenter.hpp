// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "plantsam/components.hpp"
#include "plantsam/segmentation.hpp"

namespace plantsam {

struct ReferenceSegmenterConfig {
  /// A box region accepts pixels whose luma is at most
  /// darkest + max(tolerance, contrast / 2).
  int tolerance = 32;
  /// Seeds are pixels at or below this luma quantile of the box.
  double seed_percentile = 0.10;
  /// Contrast is the bright quantile (1 - seed_percentile) of the box grown
  /// by context_margin pixels, minus the box's darkest pixel. Below
  /// min_contrast the box is taken whole.
  int min_contrast = 24;
  int context_margin = 16;
  /// Point regions accept pixels within +/- this luma of the clicked pixel.
  int point_tolerance = 16;
  Connectivity connectivity = Connectivity::Eight;

  void validate() const;
};

/// Deterministic region-growing segmenter standing in for a promptable model.
///
/// Plants are assumed darker than the sheet. For each box, growth starts from
/// the darkest pixels and spreads through connected pixels within tolerance,
/// never leaving the box. Positive points add the connected band of similar
/// luma around the point, negative points remove theirs:
///
///   mask = (box regions | positive regions) - negative regions
class ReferenceSegmenter final : public Segmenter {
 public:
  explicit ReferenceSegmenter(ReferenceSegmenterConfig config = {});

  SegmenterCapabilities capabilities() const override { return {true, true, 0}; }
  SegmentationResult segment(const RasterImage& patch, const PromptSet& prompts) const override;
  std::string name() const override { return "reference"; }

  BinaryMask box_region(const RasterImage& gray, const BoundingBox& box) const;
  BinaryMask point_region(const RasterImage& gray, Point point) const;

 private:
  ReferenceSegmenterConfig config_;
};

}  // namespace plantsam
