// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/segmentation.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "plantsam/error.hpp"

namespace plantsam {

BinaryMask upscale_nearest(const BinaryMask& mask, int width, int height) {
  if (mask.width() == width && mask.height() == height) return mask;
  BinaryMask out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = static_cast<int>(static_cast<long long>(y) * mask.height() / height);
    for (int x = 0; x < width; ++x) {
      const int sx = static_cast<int>(static_cast<long long>(x) * mask.width() / width);
      out.set(x, y, mask.get(sx, sy));
    }
  }
  return out;
}

BinaryMask clip_to_boxes(const BinaryMask& mask, std::span<const BoundingBox> boxes) {
  BinaryMask out(mask.width(), mask.height());
  for (const auto& box : boxes) {
    const BoundingBox b = clamp_to(box, mask.width(), mask.height());
    if (!b.valid()) continue;
    for (int y = b.y_min; y <= b.y_max; ++y) {
      for (int x = b.x_min; x <= b.x_max; ++x) {
        if (mask.get(x, y)) out.set(x, y, true);
      }
    }
  }
  return out;
}

SegmentationResult run_segmenter(const Segmenter& segmenter, const RasterImage& patch,
                                 const PromptSet& prompts, bool clip) {
  if (patch.empty()) throw Error(ErrorCode::InvalidArgument, "cannot segment an empty patch");
  if (prompts.empty()) return {BinaryMask(patch.width(), patch.height()), 0.0};

  const auto caps = segmenter.capabilities();
  if (!prompts.boxes.empty() && !caps.accepts_boxes) {
    throw Error(ErrorCode::Unsupported,
                fmt::format("segmenter '{}' does not accept box prompts", segmenter.name()));
  }
  if (prompts.has_points() && !caps.accepts_points) {
    throw Error(ErrorCode::Unsupported,
                fmt::format("segmenter '{}' does not accept point prompts", segmenter.name()));
  }
  auto inside = [&](Point p) {
    return p.x >= 0 && p.y >= 0 && p.x < patch.width() && p.y < patch.height();
  };
  for (const auto& p : prompts.positive_points) {
    if (!inside(p)) throw Error(ErrorCode::InvalidArgument, "positive point outside the patch");
  }
  for (const auto& p : prompts.negative_points) {
    if (!inside(p)) throw Error(ErrorCode::InvalidArgument, "negative point outside the patch");
  }

  SegmentationResult result = segmenter.segment(patch, prompts);
  if (result.mask.empty()) {
    throw Error(ErrorCode::Backend,
                fmt::format("segmenter '{}' returned no mask", segmenter.name()));
  }
  result.mask = upscale_nearest(result.mask, patch.width(), patch.height());
  if (clip && !prompts.has_points()) result.mask = clip_to_boxes(result.mask, prompts.boxes);
  result.score = std::clamp(result.score, 0.0, 1.0);
  return result;
}

}  // namespace plantsam
