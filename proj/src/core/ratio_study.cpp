// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/ratio_study.hpp"

#include "plantsam/tiling.hpp"

namespace plantsam {

ImageRatios image_box_ratios(const std::string& image_id, const BinaryMask& mask,
                             const DetectorConfig& config) {
  config.validate();
  ImageRatios out{image_id, {}, {}};
  const PatchPlan plan = plan_for(mask.width(), mask.height());
  for (const auto& tile : split(mask, plan)) {
    const BinaryMask& local = tile.pixels;
    if (!local.any()) continue;
    const PromptSet multi = multi_region_prompt(local, config);
    if (multi.boxes.empty()) continue;
    const PromptSet single = single_box_prompt(local);
    out.single_box.ratio_sum += plant_to_box_ratio(local, single.boxes);
    out.single_box.boxes += 1;
    out.multi_region.ratio_sum +=
        plant_to_box_ratio(local, multi.boxes) * static_cast<double>(multi.boxes.size());
    out.multi_region.boxes += multi.boxes.size();
  }
  return out;
}

RatioSummary summarize_ratios(std::span<const ImageRatios> images) {
  RatioSummary s;
  StrategyRatio single_all;
  StrategyRatio multi_all;
  for (const auto& img : images) {
    if (img.single_box.boxes == 0 || img.multi_region.boxes == 0) {
      ++s.skipped;
      continue;
    }
    ++s.images;
    s.single_box_image_mean += img.single_box.mean();
    s.multi_region_image_mean += img.multi_region.mean();
    single_all.ratio_sum += img.single_box.ratio_sum;
    single_all.boxes += img.single_box.boxes;
    multi_all.ratio_sum += img.multi_region.ratio_sum;
    multi_all.boxes += img.multi_region.boxes;
  }
  if (s.images > 0) {
    s.single_box_image_mean /= static_cast<double>(s.images);
    s.multi_region_image_mean /= static_cast<double>(s.images);
  }
  s.single_box_pooled = single_all.mean();
  s.multi_region_pooled = multi_all.mean();
  return s;
}

}  // namespace plantsam
