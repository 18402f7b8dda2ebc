// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/detectors.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

#include "plantsam/components.hpp"
#include "plantsam/error.hpp"
#include "plantsam/morphology.hpp"

namespace plantsam {

std::vector<BoundingBox> finalize_boxes(std::vector<BoundingBox> boxes, const PatchView& patch,
                                        double confidence_threshold) {
  std::vector<BoundingBox> kept;
  kept.reserve(boxes.size());
  for (const auto& box : boxes) {
    if (box.confidence < confidence_threshold) continue;
    const BoundingBox clamped = clamp_to(box, patch.valid_width, patch.valid_height);
    if (clamped.valid()) kept.push_back(clamped);
  }
  return kept;
}

MaskOracleDetector::MaskOracleDetector(BinaryMask truth, DetectorConfig config)
    : truth_(std::move(truth)), config_(config) {
  if (truth_.empty()) throw Error(ErrorCode::NotFound, "oracle detector has no mask");
  config_.validate();
}

std::vector<BoundingBox> MaskOracleDetector::detect(const PatchView& patch) const {
  const BinaryMask local = crop(truth_, patch.origin.x, patch.origin.y, patch.pixels.width(),
                                patch.pixels.height());
  return finalize_boxes(component_boxes(local, config_), patch, config_.confidence_threshold);
}

HeuristicDetector::HeuristicDetector(HeuristicDetectorConfig heuristic, DetectorConfig config)
    : heuristic_(heuristic), config_(config) {
  config_.validate();
  if (heuristic_.difference_threshold < 0 || heuristic_.difference_threshold > 255) {
    throw Error(ErrorCode::InvalidArgument, "difference threshold must be in [0, 255]");
  }
  if (heuristic_.cleanup_radius < 0) {
    throw Error(ErrorCode::InvalidArgument, "cleanup radius must be >= 0");
  }
}

BinaryMask HeuristicDetector::difference_mask(const PatchView& patch) const {
  const RasterImage& px = patch.pixels;
  const int vw = std::min(patch.valid_width, px.width());
  const int vh = std::min(patch.valid_height, px.height());
  const int channels = px.channels();
  if (vw <= 0 || vh <= 0) return BinaryMask(px.width(), px.height());

  std::array<int, 3> paper{};
  std::vector<std::uint8_t> samples;
  samples.reserve(static_cast<std::size_t>(vw) * vh);
  for (int c = 0; c < channels; ++c) {
    samples.clear();
    for (int y = 0; y < vh; ++y) {
      for (int x = 0; x < vw; ++x) samples.push_back(px.at(x, y, c));
    }
    auto mid = samples.begin() + static_cast<std::ptrdiff_t>(samples.size() / 2);
    std::nth_element(samples.begin(), mid, samples.end());
    paper[static_cast<std::size_t>(c)] = *mid;
  }

  RasterImage diff(px.width(), px.height(), 1);
  for (int y = 0; y < vh; ++y) {
    for (int x = 0; x < vw; ++x) {
      int d = 0;
      for (int c = 0; c < channels; ++c) {
        d = std::max(d, std::abs(px.at(x, y, c) - paper[static_cast<std::size_t>(c)]));
      }
      diff.at(x, y) = static_cast<std::uint8_t>(d);
    }
  }
  BinaryMask mask = mask_from_nonblack(diff, heuristic_.difference_threshold);
  if (heuristic_.cleanup_radius > 0) {
    mask = opening(mask, StructuringElement::square(heuristic_.cleanup_radius));
  }
  return mask;
}

std::vector<BoundingBox> HeuristicDetector::detect(const PatchView& patch) const {
  if (patch.pixels.empty()) throw Error(ErrorCode::InvalidArgument, "empty patch");
  return finalize_boxes(component_boxes(difference_mask(patch), config_), patch,
                        config_.confidence_threshold);
}

}  // namespace plantsam
