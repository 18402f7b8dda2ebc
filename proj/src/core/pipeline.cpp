// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/pipeline.hpp"

#include <fmt/format.h>

#include <chrono>
#include <exception>
#include <mutex>

#include "plantsam/error.hpp"
#include "plantsam/parallel.hpp"

namespace plantsam {

namespace {

// Holds a lock only for backends that declared themselves non-reentrant.
class MaybeLock {
 public:
  MaybeLock(std::mutex& m, bool needed) : lock_(m, std::defer_lock) {
    if (needed) lock_.lock();
  }

 private:
  std::unique_lock<std::mutex> lock_;
};

}  // namespace

Patch extract_patch(const RasterImage& preprocessed, const PatchPlan& plan, int row, int col) {
  const Point o = plan.origin(row, col);
  return {col, row, crop(preprocessed, o.x, o.y, plan.patch_size, plan.patch_size)};
}

PromptSet restrict_to_valid(PromptSet prompts, const PatchPlan& plan, int row, int col) {
  const BoundingBox valid = plan.valid_region(row, col);
  const int vw = valid.width();
  const int vh = valid.height();
  std::vector<BoundingBox> kept;
  for (const auto& b : prompts.boxes) {
    const BoundingBox c = clamp_to(b, vw, vh);
    if (c.valid()) kept.push_back(c);
  }
  prompts.boxes = std::move(kept);
  return prompts;
}

PipelineResult segment_image(const RasterImage& image, const Detector& detector,
                             const Segmenter& segmenter, const PipelineConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.detector.validate();

  PipelineResult result;
  const RasterImage prepared = preprocess(image, config.morphology);
  result.plan = plan_for(prepared.width(), prepared.height());
  const PatchPlan& plan = result.plan;
  const auto patches = split(prepared, plan);

  const int count = plan.patch_count();
  std::vector<BinaryMask> masks(static_cast<std::size_t>(count));
  result.patches.resize(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(count));
  std::mutex detector_mutex;
  std::mutex segmenter_mutex;
  const bool lock_detector = !detector.reentrant();
  const bool lock_segmenter = !segmenter.reentrant();

#pragma omp parallel for schedule(dynamic) num_threads(parallel::resolve_workers(config.workers))
  for (int i = 0; i < count; ++i) {
    const Patch& patch = patches[static_cast<std::size_t>(i)];
    PatchOutcome& outcome = result.patches[static_cast<std::size_t>(i)];
    outcome.grid_row = patch.grid_row;
    outcome.grid_col = patch.grid_col;
    try {
      const BoundingBox valid = plan.valid_region(patch.grid_row, patch.grid_col);
      const PatchView view{patch.pixels, patch.grid_row, patch.grid_col,
                           plan.origin(patch.grid_row, patch.grid_col), valid.width(),
                           valid.height()};
      std::vector<BoundingBox> boxes;
      {
        MaybeLock lock(detector_mutex, lock_detector);
        boxes = detector.detect(view);
      }
      outcome.prompts = restrict_to_valid(make_prompts(config.strategy, boxes, config.detector),
                                          plan, patch.grid_row, patch.grid_col);
      SegmentationResult seg;
      {
        MaybeLock lock(segmenter_mutex, lock_segmenter);
        seg = run_segmenter(segmenter, patch.pixels, outcome.prompts, config.clip_to_boxes);
      }
      outcome.score = seg.score;
      masks[static_cast<std::size_t>(i)] = std::move(seg.mask);
    } catch (...) {
      failures[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }

  for (int i = 0; i < count; ++i) {
    if (!failures[static_cast<std::size_t>(i)]) continue;
    const auto& o = result.patches[static_cast<std::size_t>(i)];
    try {
      std::rethrow_exception(failures[static_cast<std::size_t>(i)]);
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("patch r{} c{}: {}", o.grid_row, o.grid_col, e.what()));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::Backend,
                  fmt::format("patch r{} c{}: {}", o.grid_row, o.grid_col, e.what()));
    }
  }

  result.mask = stitch(masks, plan);
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace plantsam
