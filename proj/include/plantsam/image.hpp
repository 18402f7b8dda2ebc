// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace plantsam {

struct Point {
  int x = 0;
  int y = 0;

  bool operator==(const Point&) const = default;
};

/// Axis-aligned box with inclusive pixel coordinates.
///
/// Area is (x_max - x_min + 1) * (y_max - y_min + 1), so a single pixel has
/// area 1. Confidence is 1.0 for boxes derived from masks.
struct BoundingBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;
  double confidence = 1.0;

  int width() const { return x_max - x_min + 1; }
  int height() const { return y_max - y_min + 1; }
  std::size_t area() const {
    return static_cast<std::size_t>(width()) * static_cast<std::size_t>(height());
  }
  bool valid() const { return x_min <= x_max && y_min <= y_max; }
  bool contains(Point p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  bool contains(const BoundingBox& other) const {
    return other.x_min >= x_min && other.x_max <= x_max && other.y_min >= y_min &&
           other.y_max <= y_max;
  }
  BoundingBox translated(int dx, int dy) const {
    return {x_min + dx, y_min + dy, x_max + dx, y_max + dy, confidence};
  }

  /// Geometric equality; confidence is ignored.
  bool same_extent(const BoundingBox& o) const {
    return x_min == o.x_min && y_min == o.y_min && x_max == o.x_max && y_max == o.y_max;
  }
  bool operator==(const BoundingBox&) const = default;
};

/// Smallest box containing both inputs. Confidence is the minimum of the two.
BoundingBox hull(const BoundingBox& a, const BoundingBox& b);

/// Intersection of `box` with [0, width) x [0, height); nullopt-like result is
/// signalled by an invalid box (x_min > x_max or y_min > y_max).
BoundingBox clamp_to(const BoundingBox& box, int width, int height);

/// 8-bit raster with 1 or 3 interleaved channels, row-major.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, int channels, std::uint8_t fill = 0);
  RasterImage(int width, int height, int channels, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::uint8_t at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }

  std::span<const std::uint8_t> row(int y) const {
    return {data_.data() + index(0, y, 0), static_cast<std::size_t>(width_ * channels_)};
  }
  std::span<std::uint8_t> row(int y) {
    return {data_.data() + index(0, y, 0), static_cast<std::size_t>(width_ * channels_)};
  }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> data() { return data_; }

  bool operator==(const RasterImage&) const = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Foreground/background grid. Each cell stores 0 or 1; foreground means plant.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return bits_.empty(); }
  std::size_t pixel_count() const { return bits_.size(); }

  bool get(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool value) { bits_[index(x, y)] = value ? 1 : 0; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  /// Raw 0/1 cells. Writers must keep every value in {0, 1}.
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::span<std::uint8_t> bits() { return bits_; }

  std::size_t count() const;
  bool any() const;

  bool operator==(const BinaryMask&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

BinaryMask complement(const BinaryMask& mask);
BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_intersection(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_difference(const BinaryMask& a, const BinaryMask& b);

/// True when every foreground pixel of `inner` is foreground in `outer`.
bool is_subset(const BinaryMask& inner, const BinaryMask& outer);

/// Integer BT.601 luma of one pixel; grayscale images return the sample.
std::uint8_t luminance(const RasterImage& image, int x, int y);

/// Single-channel luma plane of `image`.
RasterImage to_gray(const RasterImage& image);

/// Renders a mask as a single-channel image, 0 = background, 255 = foreground.
RasterImage mask_to_image(const BinaryMask& mask);

/// Tight box around all foreground pixels; invalid box when the mask is empty.
BoundingBox foreground_bounds(const BinaryMask& mask);

/// Copies the [x0, x0+w) x [y0, y0+h) window; cells outside the source are 0.
BinaryMask crop(const BinaryMask& mask, int x0, int y0, int w, int h);
RasterImage crop(const RasterImage& image, int x0, int y0, int w, int h);

}  // namespace plantsam
