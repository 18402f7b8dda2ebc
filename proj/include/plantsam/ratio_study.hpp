// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Plant-to-box area comparison between the single-box and multi-region
// prompt strategies, using mask-derived boxes on each patch of an image.

#include <span>
#include <string>
#include <vector>

#include "plantsam/prompting.hpp"

namespace plantsam {

struct StrategyRatio {
  double ratio_sum = 0.0;
  std::size_t boxes = 0;

  /// Mean ratio over this image's boxes; 0 when there are none.
  double mean() const { return boxes ? ratio_sum / static_cast<double>(boxes) : 0.0; }
};

struct ImageRatios {
  std::string image_id;
  StrategyRatio single_box;
  StrategyRatio multi_region;
};

/// Patches `mask` with the width-driven plan and scores both strategies on
/// every patch with at least one component of min_component_pixels.
ImageRatios image_box_ratios(const std::string& image_id, const BinaryMask& mask,
                             const DetectorConfig& config);

struct RatioSummary {
  /// Mean of per-image means, over images with at least one box.
  double single_box_image_mean = 0.0;
  double multi_region_image_mean = 0.0;
  /// Mean over every box of every image.
  double single_box_pooled = 0.0;
  double multi_region_pooled = 0.0;
  std::size_t images = 0;
  std::size_t skipped = 0;
};

RatioSummary summarize_ratios(std::span<const ImageRatios> images);

}  // namespace plantsam
