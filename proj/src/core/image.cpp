// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/image.hpp"

#include <algorithm>
#include <string>

#include "plantsam/error.hpp"

namespace plantsam {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument, "raster dimensions must be positive, got " +
                                                std::to_string(width) + "x" +
                                                std::to_string(height));
  }
}

void check_same_dims(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::DimensionMismatch,
                "mask sizes differ: " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
  }
}

template <typename Op>
BinaryMask combine(const BinaryMask& a, const BinaryMask& b, Op op) {
  check_same_dims(a, b);
  BinaryMask out(a.width(), a.height());
  auto lhs = a.bits();
  auto rhs = b.bits();
  auto dst = out.bits();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = op(lhs[i], rhs[i]) ? 1 : 0;
  return out;
}

}  // namespace

BoundingBox hull(const BoundingBox& a, const BoundingBox& b) {
  return {std::min(a.x_min, b.x_min), std::min(a.y_min, b.y_min), std::max(a.x_max, b.x_max),
          std::max(a.y_max, b.y_max), std::min(a.confidence, b.confidence)};
}

BoundingBox clamp_to(const BoundingBox& box, int width, int height) {
  return {std::max(box.x_min, 0), std::max(box.y_min, 0), std::min(box.x_max, width - 1),
          std::min(box.y_max, height - 1), box.confidence};
}

RasterImage::RasterImage(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height);
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::InvalidArgument,
                "raster images have 1 or 3 channels, got " + std::to_string(channels));
  }
  data_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

RasterImage::RasterImage(int width, int height, int channels, std::vector<std::uint8_t> data)
    : RasterImage(width, height, channels) {
  if (data.size() != data_.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "pixel buffer holds " + std::to_string(data.size()) + " bytes, expected " +
                    std::to_string(data_.size()));
  }
  data_ = std::move(data);
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
  check_dims(width, height);
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
               fill ? 1 : 0);
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool BinaryMask::any() const {
  return std::find(bits_.begin(), bits_.end(), std::uint8_t{1}) != bits_.end();
}

BinaryMask complement(const BinaryMask& mask) {
  BinaryMask out(mask.width(), mask.height());
  auto src = mask.bits();
  auto dst = out.bits();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] ? 0 : 1;
  return out;
}

BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b) {
  return combine(a, b, [](std::uint8_t x, std::uint8_t y) { return x || y; });
}

BinaryMask mask_intersection(const BinaryMask& a, const BinaryMask& b) {
  return combine(a, b, [](std::uint8_t x, std::uint8_t y) { return x && y; });
}

BinaryMask mask_difference(const BinaryMask& a, const BinaryMask& b) {
  return combine(a, b, [](std::uint8_t x, std::uint8_t y) { return x && !y; });
}

bool is_subset(const BinaryMask& inner, const BinaryMask& outer) {
  check_same_dims(inner, outer);
  auto in = inner.bits();
  auto out = outer.bits();
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] && !out[i]) return false;
  }
  return true;
}

std::uint8_t luminance(const RasterImage& image, int x, int y) {
  if (image.channels() == 1) return image.at(x, y);
  const unsigned r = image.at(x, y, 0);
  const unsigned g = image.at(x, y, 1);
  const unsigned b = image.at(x, y, 2);
  return static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
}

RasterImage to_gray(const RasterImage& image) {
  if (image.channels() == 1) return image;
  RasterImage out(image.width(), image.height(), 1);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) out.at(x, y) = luminance(image, x, y);
  }
  return out;
}

RasterImage mask_to_image(const BinaryMask& mask) {
  RasterImage out(mask.width(), mask.height(), 1);
  auto src = mask.bits();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 255 : 0;
  return out;
}

BoundingBox foreground_bounds(const BinaryMask& mask) {
  BoundingBox box{mask.width(), mask.height(), -1, -1, 1.0};
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.get(x, y)) continue;
      box.x_min = std::min(box.x_min, x);
      box.y_min = std::min(box.y_min, y);
      box.x_max = std::max(box.x_max, x);
      box.y_max = std::max(box.y_max, y);
    }
  }
  return box;
}

BinaryMask crop(const BinaryMask& mask, int x0, int y0, int w, int h) {
  BinaryMask out(w, h);
  const int y_begin = std::max(0, -y0);
  const int y_end = std::min(h, mask.height() - y0);
  const int x_begin = std::max(0, -x0);
  const int x_end = std::min(w, mask.width() - x0);
  for (int y = y_begin; y < y_end; ++y) {
    for (int x = x_begin; x < x_end; ++x) out.set(x, y, mask.get(x + x0, y + y0));
  }
  return out;
}

RasterImage crop(const RasterImage& image, int x0, int y0, int w, int h) {
  RasterImage out(w, h, image.channels());
  const int c = image.channels();
  const int y_begin = std::max(0, -y0);
  const int y_end = std::min(h, image.height() - y0);
  const int x_begin = std::max(0, -x0);
  const int x_end = std::min(w, image.width() - x0);
  if (x_begin >= x_end) return out;
  for (int y = y_begin; y < y_end; ++y) {
    auto src = image.row(y + y0).subspan(static_cast<std::size_t>((x_begin + x0) * c),
                                         static_cast<std::size_t>((x_end - x_begin) * c));
    auto dst = out.row(y).subspan(static_cast<std::size_t>(x_begin * c));
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

}  // namespace plantsam
