// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/reference_segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "plantsam/error.hpp"

namespace plantsam {

namespace {

// Flood fill from every seed through pixels accepted by `accept`, limited to
// `bounds`. Returns a raster-sized mask.
template <typename Seed, typename Accept>
BinaryMask grow(const RasterImage& gray, const BoundingBox& bounds, Connectivity connectivity,
                Seed is_seed, Accept accept) {
  static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int neighbours = connectivity == Connectivity::Four ? 4 : 8;

  BinaryMask region(gray.width(), gray.height());
  std::vector<Point> stack;
  for (int y = bounds.y_min; y <= bounds.y_max; ++y) {
    for (int x = bounds.x_min; x <= bounds.x_max; ++x) {
      if (!region.get(x, y) && is_seed(x, y) && accept(x, y)) {
        region.set(x, y, true);
        stack.push_back({x, y});
      }
    }
  }
  while (!stack.empty()) {
    const Point p = stack.back();
    stack.pop_back();
    for (int n = 0; n < neighbours; ++n) {
      const int nx = p.x + kDx[n];
      const int ny = p.y + kDy[n];
      if (!bounds.contains(Point{nx, ny}) || region.get(nx, ny) || !accept(nx, ny)) continue;
      region.set(nx, ny, true);
      stack.push_back({nx, ny});
    }
  }
  return region;
}

int quantile(std::vector<std::uint8_t>& values, double q) {
  const auto k = static_cast<std::size_t>(std::floor(q * static_cast<double>(values.size() - 1)));
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
  return values[k];
}

}  // namespace

void ReferenceSegmenterConfig::validate() const {
  if (tolerance < 0 || tolerance > 255 || point_tolerance < 0 || point_tolerance > 255 ||
      min_contrast < 0 || min_contrast > 255 || context_margin < 0) {
    throw Error(ErrorCode::InvalidArgument, "reference segmenter intensities must be in [0, 255]");
  }
  if (!(seed_percentile > 0.0 && seed_percentile < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "seed percentile must be in (0, 0.5)");
  }
}

ReferenceSegmenter::ReferenceSegmenter(ReferenceSegmenterConfig config) : config_(config) {
  config_.validate();
}

BinaryMask ReferenceSegmenter::box_region(const RasterImage& gray, const BoundingBox& box) const {
  const BoundingBox b = clamp_to(box, gray.width(), gray.height());
  if (!b.valid()) return BinaryMask(gray.width(), gray.height());

  std::vector<std::uint8_t> lumas;
  lumas.reserve(b.area());
  for (int y = b.y_min; y <= b.y_max; ++y) {
    for (int x = b.x_min; x <= b.x_max; ++x) lumas.push_back(gray.at(x, y));
  }
  const int darkest = *std::min_element(lumas.begin(), lumas.end());
  const int seed_level = quantile(lumas, config_.seed_percentile);

  const int m = config_.context_margin;
  const BoundingBox ctx = clamp_to({b.x_min - m, b.y_min - m, b.x_max + m, b.y_max + m, 1.0},
                                   gray.width(), gray.height());
  std::vector<std::uint8_t> context;
  context.reserve(ctx.area());
  for (int y = ctx.y_min; y <= ctx.y_max; ++y) {
    for (int x = ctx.x_min; x <= ctx.x_max; ++x) context.push_back(gray.at(x, y));
  }
  const int contrast = quantile(context, 1.0 - config_.seed_percentile) - darkest;

  BinaryMask region(gray.width(), gray.height());
  if (contrast < config_.min_contrast) {
    for (int y = b.y_min; y <= b.y_max; ++y) {
      for (int x = b.x_min; x <= b.x_max; ++x) region.set(x, y, true);
    }
    return region;
  }

  const int limit = darkest + std::max(config_.tolerance, contrast / 2);
  const int seed_limit = std::min(seed_level, limit);
  return grow(
      gray, b, config_.connectivity, [&](int x, int y) { return gray.at(x, y) <= seed_limit; },
      [&](int x, int y) { return gray.at(x, y) <= limit; });
}

BinaryMask ReferenceSegmenter::point_region(const RasterImage& gray, Point point) const {
  const int level = gray.at(point.x, point.y);
  const BoundingBox all{0, 0, gray.width() - 1, gray.height() - 1, 1.0};
  return grow(
      gray, all, config_.connectivity, [&](int x, int y) { return x == point.x && y == point.y; },
      [&](int x, int y) { return std::abs(gray.at(x, y) - level) <= config_.point_tolerance; });
}

SegmentationResult ReferenceSegmenter::segment(const RasterImage& patch,
                                               const PromptSet& prompts) const {
  const RasterImage gray = to_gray(patch);
  BinaryMask mask(patch.width(), patch.height());
  for (const auto& box : prompts.boxes) mask = mask_union(mask, box_region(gray, box));
  for (const auto& p : prompts.positive_points) mask = mask_union(mask, point_region(gray, p));
  for (const auto& p : prompts.negative_points) {
    mask = mask_difference(mask, point_region(gray, p));
  }
  const bool any = mask.any();
  return {std::move(mask), any ? 1.0 : 0.0};
}

}  // namespace plantsam
