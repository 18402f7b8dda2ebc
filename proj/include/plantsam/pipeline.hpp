// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "plantsam/detectors.hpp"
#include "plantsam/morphology.hpp"
#include "plantsam/prompting.hpp"
#include "plantsam/segmentation.hpp"
#include "plantsam/tiling.hpp"

namespace plantsam {

struct PipelineConfig {
  MorphologyConfig morphology{};
  PromptStrategy strategy = PromptStrategy::MultiRegion;
  DetectorConfig detector{};
  /// Clip backend masks to their prompt boxes.
  bool clip_to_boxes = true;
  /// Patch fan-out; 0 uses every OpenMP thread.
  int workers = 0;
};

struct PatchOutcome {
  int grid_row = 0;
  int grid_col = 0;
  /// Detector boxes after strategy application, in patch coordinates.
  PromptSet prompts;
  double score = 0.0;
};

struct PipelineResult {
  BinaryMask mask;
  PatchPlan plan;
  /// Row-major, one entry per patch.
  std::vector<PatchOutcome> patches;
  double seconds = 0.0;
};

/// Preprocess, split, detect, prompt, segment and stitch one image. The
/// result does not depend on the worker count: patches are gathered by grid
/// position. Backend errors are rethrown with the patch coordinates attached.
PipelineResult segment_image(const RasterImage& image, const Detector& detector,
                             const Segmenter& segmenter, const PipelineConfig& config = {});

/// The patch of a preprocessed image at (row, col) with its view metadata.
Patch extract_patch(const RasterImage& preprocessed, const PatchPlan& plan, int row, int col);

/// Boxes clipped to the valid part of a patch; shared by the pipeline and
/// interactive refinement so both see identical prompts.
PromptSet restrict_to_valid(PromptSet prompts, const PatchPlan& plan, int row, int col);

}  // namespace plantsam
