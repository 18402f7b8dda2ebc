// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/reference_kernels.hpp"

#include <algorithm>

#include "plantsam/error.hpp"
#include "plantsam/tiling.hpp"

namespace plantsam::reference {

namespace {

// Direct (2r+1)^2 window; out-of-raster samples read as 0.
template <typename Reduce>
std::uint8_t window(const RasterImage& image, int x, int y, int c, int r, std::uint8_t init,
                    Reduce reduce) {
  std::uint8_t acc = init;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const int sx = x + dx;
      const int sy = y + dy;
      const bool inside = sx >= 0 && sy >= 0 && sx < image.width() && sy < image.height();
      acc = reduce(acc, inside ? image.at(sx, sy, c) : std::uint8_t{0});
    }
  }
  return acc;
}

template <typename Reduce>
RasterImage filter(const RasterImage& image, StructuringElement se, std::uint8_t init,
                   Reduce reduce) {
  if (se.radius < 1) throw Error(ErrorCode::InvalidArgument, "radius must be >= 1");
  RasterImage out(image.width(), image.height(), image.channels());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < image.channels(); ++c) {
        out.at(x, y, c) = window(image, x, y, c, se.radius, init, reduce);
      }
    }
  }
  return out;
}

RasterImage as_image(const BinaryMask& mask) {
  RasterImage img(mask.width(), mask.height(), 1);
  std::copy(mask.bits().begin(), mask.bits().end(), img.data().begin());
  return img;
}

BinaryMask as_mask(const RasterImage& img) {
  BinaryMask mask(img.width(), img.height());
  std::copy(img.data().begin(), img.data().end(), mask.bits().begin());
  return mask;
}

constexpr auto kMin = [](std::uint8_t a, std::uint8_t b) { return std::min(a, b); };
constexpr auto kMax = [](std::uint8_t a, std::uint8_t b) { return std::max(a, b); };

}  // namespace

RasterImage erode(const RasterImage& image, StructuringElement se) {
  return filter(image, se, 255, kMin);
}

RasterImage dilate(const RasterImage& image, StructuringElement se) {
  return filter(image, se, 0, kMax);
}

BinaryMask erode(const BinaryMask& mask, StructuringElement se) {
  return as_mask(reference::erode(as_image(mask), se));
}

BinaryMask dilate(const BinaryMask& mask, StructuringElement se) {
  return as_mask(reference::dilate(as_image(mask), se));
}

BinaryMask mask_from_nonblack(const RasterImage& image, int threshold) {
  BinaryMask out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      int peak = 0;
      for (int c = 0; c < image.channels(); ++c) peak = std::max<int>(peak, image.at(x, y, c));
      out.set(x, y, peak > threshold);
    }
  }
  return out;
}

OverlapCounts overlap_counts(const BinaryMask& pred, const BinaryMask& truth) {
  if (pred.width() != truth.width() || pred.height() != truth.height()) {
    throw Error(ErrorCode::DimensionMismatch, "mask sizes differ");
  }
  OverlapCounts counts;
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      const bool p = pred.get(x, y);
      const bool t = truth.get(x, y);
      counts.predicted += p;
      counts.truth += t;
      counts.intersection += p && t;
    }
  }
  return counts;
}

std::vector<BinaryMask> split(const BinaryMask& mask, const PatchPlan& plan) {
  std::vector<BinaryMask> out;
  for (int row = 0; row < plan.rows; ++row) {
    for (int col = 0; col < plan.cols; ++col) {
      BinaryMask tile(plan.patch_size, plan.patch_size);
      for (int y = 0; y < plan.patch_size; ++y) {
        for (int x = 0; x < plan.patch_size; ++x) {
          const int sx = col * plan.patch_size + x;
          const int sy = row * plan.patch_size + y;
          if (mask.in_bounds(sx, sy)) tile.set(x, y, mask.get(sx, sy));
        }
      }
      out.push_back(std::move(tile));
    }
  }
  return out;
}

BinaryMask stitch(std::span<const BinaryMask> masks, const PatchPlan& plan) {
  BinaryMask out(plan.source_width, plan.source_height);
  for (int y = 0; y < plan.source_height; ++y) {
    for (int x = 0; x < plan.source_width; ++x) {
      const auto& tile =
          masks[static_cast<std::size_t>(plan.index(y / plan.patch_size, x / plan.patch_size))];
      out.set(x, y, tile.get(x % plan.patch_size, y % plan.patch_size));
    }
  }
  return out;
}

}  // namespace plantsam::reference
