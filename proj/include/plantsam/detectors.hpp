// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "plantsam/image.hpp"
#include "plantsam/prompting.hpp"

namespace plantsam {

/// A patch as seen by a detector: its pixels plus where it sits in the
/// source image. Pixels past valid_width/valid_height are padding.
struct PatchView {
  const RasterImage& pixels;
  int grid_row = 0;
  int grid_col = 0;
  Point origin{};
  int valid_width = 0;
  int valid_height = 0;

  static PatchView whole(const RasterImage& pixels) {
    return {pixels, 0, 0, {0, 0}, pixels.width(), pixels.height()};
  }
};

/// Plant-region detector. Boxes are in patch coordinates.
class Detector {
 public:
  virtual ~Detector() = default;

  virtual std::vector<BoundingBox> detect(const PatchView& patch) const = 0;
  virtual std::string name() const = 0;
  /// False when concurrent detect() calls must be serialized by the caller.
  virtual bool reentrant() const { return true; }

  std::vector<BoundingBox> detect(const RasterImage& patch) const {
    return detect(PatchView::whole(patch));
  }
};

/// Clamps boxes to the patch's valid region, drops degenerate ones and those
/// under the confidence threshold.
std::vector<BoundingBox> finalize_boxes(std::vector<BoundingBox> boxes, const PatchView& patch,
                                        double confidence_threshold);

/// Boxes from connected components of a known mask (ground truth, or a
/// segmented rendering). The mask is in source-image coordinates.
class MaskOracleDetector final : public Detector {
 public:
  MaskOracleDetector(BinaryMask truth, DetectorConfig config = {});

  std::vector<BoundingBox> detect(const PatchView& patch) const override;
  using Detector::detect;
  std::string name() const override { return "oracle"; }

 private:
  BinaryMask truth_;
  DetectorConfig config_;
};

struct HeuristicDetectorConfig {
  /// Minimum per-channel distance from the estimated paper color.
  int difference_threshold = 40;
  /// Opening radius applied to the difference mask; 0 disables it.
  int cleanup_radius = 1;
};

/// Model-free detector: estimates the paper color as the per-channel median
/// of the valid region, then boxes the components that differ from it.
class HeuristicDetector final : public Detector {
 public:
  explicit HeuristicDetector(HeuristicDetectorConfig heuristic = {}, DetectorConfig config = {});

  std::vector<BoundingBox> detect(const PatchView& patch) const override;
  using Detector::detect;
  std::string name() const override { return "heuristic"; }

  /// Foreground candidate mask the boxes are derived from (patch-sized).
  BinaryMask difference_mask(const PatchView& patch) const;

 private:
  HeuristicDetectorConfig heuristic_;
  DetectorConfig config_;
};

}  // namespace plantsam
