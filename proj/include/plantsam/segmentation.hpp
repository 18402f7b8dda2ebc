// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "plantsam/image.hpp"
#include "plantsam/prompting.hpp"

namespace plantsam {

struct SegmenterCapabilities {
  bool accepts_boxes = true;
  bool accepts_points = true;
  /// Side of the square mask the backend produces; 0 means patch resolution.
  int native_mask_resolution = 0;
};

struct SegmentationResult {
  BinaryMask mask;
  double score = 0.0;
};

/// Promptable segmenter. Multiple boxes are merged by union.
class Segmenter {
 public:
  virtual ~Segmenter() = default;

  virtual SegmenterCapabilities capabilities() const = 0;
  /// Returns a mask at native resolution (patch-sized when that is 0).
  virtual SegmentationResult segment(const RasterImage& patch, const PromptSet& prompts) const = 0;
  virtual std::string name() const = 0;
  virtual bool reentrant() const { return true; }
};

/// Nearest-neighbour resize; identity when the size already matches.
BinaryMask upscale_nearest(const BinaryMask& mask, int width, int height);

/// Foreground restricted to the union of `boxes`.
BinaryMask clip_to_boxes(const BinaryMask& mask, std::span<const BoundingBox> boxes);

/// Checks prompts against the backend's capabilities, runs it, brings the
/// mask to patch size and (for box-only prompts, when `clip` is set) clips it
/// to the union of the boxes. Empty prompts yield an empty mask, score 0.
SegmentationResult run_segmenter(const Segmenter& segmenter, const RasterImage& patch,
                                 const PromptSet& prompts, bool clip = true);

}  // namespace plantsam
