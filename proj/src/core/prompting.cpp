// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/prompting.hpp"

#include <fmt/format.h>

#include "plantsam/error.hpp"

namespace plantsam {

void DetectorConfig::validate() const {
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("confidence threshold must be in [0, 1], got {}", confidence_threshold));
  }
  if (min_component_pixels < 1) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("min component pixels must be >= 1, got {}", min_component_pixels));
  }
}

PromptStrategy parse_strategy(std::string_view name) {
  if (name == "single_box") return PromptStrategy::SingleBox;
  if (name == "multi_region") return PromptStrategy::MultiRegion;
  throw Error(ErrorCode::InvalidArgument,
              fmt::format("unknown strategy '{}' (expected single_box or multi_region)", name));
}

std::string_view to_string(PromptStrategy strategy) {
  return strategy == PromptStrategy::SingleBox ? "single_box" : "multi_region";
}

PromptSet single_box_prompt(const BinaryMask& mask) {
  const BoundingBox box = foreground_bounds(mask);
  if (!box.valid()) {
    throw Error(ErrorCode::InvalidArgument, "single-box prompt needs at least one plant pixel");
  }
  return {{box}, {}, {}};
}

PromptSet single_box_prompt(std::span<const BoundingBox> boxes) {
  if (boxes.empty()) {
    throw Error(ErrorCode::InvalidArgument, "single-box prompt needs at least one box");
  }
  BoundingBox box = boxes.front();
  for (const auto& b : boxes.subspan(1)) box = hull(box, b);
  return {{box}, {}, {}};
}

std::vector<BoundingBox> component_boxes(const BinaryMask& mask, const DetectorConfig& config) {
  std::vector<BoundingBox> boxes;
  for (const auto& component : connected_components(mask, config.connectivity)) {
    if (component.pixel_count >= static_cast<std::size_t>(config.min_component_pixels)) {
      boxes.push_back(component.bbox);
    }
  }
  return boxes;
}

PromptSet multi_region_prompt(const BinaryMask& mask, const DetectorConfig& config) {
  config.validate();
  if (!mask.any()) {
    throw Error(ErrorCode::InvalidArgument, "multi-region prompt needs at least one plant pixel");
  }
  return {component_boxes(mask, config), {}, {}};
}

PromptSet multi_region_prompt(std::span<const BoundingBox> boxes, const DetectorConfig& config) {
  config.validate();
  if (boxes.empty()) {
    throw Error(ErrorCode::InvalidArgument, "multi-region prompt needs at least one box");
  }
  PromptSet prompts;
  for (const auto& b : boxes) {
    if (b.confidence >= config.confidence_threshold) prompts.boxes.push_back(b);
  }
  return prompts;
}

PromptSet make_prompts(PromptStrategy strategy, std::span<const BoundingBox> boxes,
                       const DetectorConfig& config) {
  if (boxes.empty()) return {};
  return strategy == PromptStrategy::SingleBox ? single_box_prompt(boxes)
                                               : multi_region_prompt(boxes, config);
}

double plant_to_box_ratio(const BinaryMask& mask, std::span<const BoundingBox> boxes) {
  if (boxes.empty()) {
    throw Error(ErrorCode::InvalidArgument, "plant-to-box ratio needs at least one box");
  }
  double total = 0.0;
  for (const auto& box : boxes) {
    if (!box.valid()) throw Error(ErrorCode::InvalidArgument, "degenerate box in ratio");
    const BoundingBox inside = clamp_to(box, mask.width(), mask.height());
    std::size_t plant = 0;
    if (inside.valid()) {
      for (int y = inside.y_min; y <= inside.y_max; ++y) {
        for (int x = inside.x_min; x <= inside.x_max; ++x) plant += mask.get(x, y);
      }
    }
    total += static_cast<double>(plant) / static_cast<double>(box.area());
  }
  return total / static_cast<double>(boxes.size());
}

}  // namespace plantsam
