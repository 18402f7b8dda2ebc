// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plantsam/components.hpp"
#include "plantsam/image.hpp"

namespace plantsam {

struct PromptSet {
  std::vector<BoundingBox> boxes;
  std::vector<Point> positive_points;
  std::vector<Point> negative_points;

  bool empty() const {
    return boxes.empty() && positive_points.empty() && negative_points.empty();
  }
  bool has_points() const { return !positive_points.empty() || !negative_points.empty(); }
  bool operator==(const PromptSet&) const = default;
};

struct DetectorConfig {
  double confidence_threshold = 0.25;
  /// Components smaller than this are ignored by mask-derived detection.
  int min_component_pixels = 16;
  Connectivity connectivity = Connectivity::Eight;

  void validate() const;
};

enum class PromptStrategy { SingleBox, MultiRegion };

PromptStrategy parse_strategy(std::string_view name);
std::string_view to_string(PromptStrategy strategy);

/// One box: the hull of every foreground pixel.
PromptSet single_box_prompt(const BinaryMask& mask);
/// One box: the hull of the given boxes.
PromptSet single_box_prompt(std::span<const BoundingBox> boxes);

/// One tight box per connected component with at least
/// `config.min_component_pixels` pixels. May return no boxes when every
/// component is filtered out.
PromptSet multi_region_prompt(const BinaryMask& mask, const DetectorConfig& config);
/// Detector boxes at or above the confidence threshold, unchanged.
PromptSet multi_region_prompt(std::span<const BoundingBox> boxes, const DetectorConfig& config);

/// Applies `strategy` to detector output.
PromptSet make_prompts(PromptStrategy strategy, std::span<const BoundingBox> boxes,
                       const DetectorConfig& config);

/// Mean over boxes of (foreground pixels inside the box) / (box area).
double plant_to_box_ratio(const BinaryMask& mask, std::span<const BoundingBox> boxes);

/// Tight boxes of components of `mask`, filtered by size.
std::vector<BoundingBox> component_boxes(const BinaryMask& mask, const DetectorConfig& config);

}  // namespace plantsam
