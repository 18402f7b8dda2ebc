// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/morphology.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "plantsam/error.hpp"

namespace plantsam {

namespace {

void check_element(StructuringElement se) {
  if (se.radius < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "structuring element radius must be >= 1, got " + std::to_string(se.radius));
  }
}

struct MinOp {
  static std::uint8_t apply(std::uint8_t a, std::uint8_t b) { return std::min(a, b); }
};
struct MaxOp {
  static std::uint8_t apply(std::uint8_t a, std::uint8_t b) { return std::max(a, b); }
};

// Square min/max filter as a horizontal pass followed by a vertical pass over
// an interleaved plane. Out-of-raster samples read as 0.
template <typename Op>
std::vector<std::uint8_t> square_filter(std::span<const std::uint8_t> src, int width,
                                        int height, int channels, int radius) {
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  std::vector<std::uint8_t> tmp(src.size());
  std::vector<std::uint8_t> dst(src.size());

#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* in = src.data() + static_cast<std::size_t>(y) * stride;
    std::uint8_t* out = tmp.data() + static_cast<std::size_t>(y) * stride;
    for (int x = 0; x < width; ++x) {
      const bool clipped = x - radius < 0 || x + radius >= width;
      const int lo = std::max(0, x - radius);
      const int hi = std::min(width - 1, x + radius);
      for (int c = 0; c < channels; ++c) {
        std::uint8_t acc = clipped ? Op::apply(0, in[lo * channels + c]) : in[lo * channels + c];
        for (int k = lo + 1; k <= hi; ++k) acc = Op::apply(acc, in[k * channels + c]);
        out[x * channels + c] = acc;
      }
    }
  }

#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const bool clipped = y - radius < 0 || y + radius >= height;
    const int lo = std::max(0, y - radius);
    const int hi = std::min(height - 1, y + radius);
    std::uint8_t* out = dst.data() + static_cast<std::size_t>(y) * stride;
    const std::uint8_t* first = tmp.data() + static_cast<std::size_t>(lo) * stride;
    for (std::size_t i = 0; i < stride; ++i) {
      out[i] = clipped ? Op::apply(0, first[i]) : first[i];
    }
    for (int k = lo + 1; k <= hi; ++k) {
      const std::uint8_t* in = tmp.data() + static_cast<std::size_t>(k) * stride;
      for (std::size_t i = 0; i < stride; ++i) out[i] = Op::apply(out[i], in[i]);
    }
  }
  return dst;
}

template <typename Op>
BinaryMask filter_mask(const BinaryMask& mask, StructuringElement se) {
  check_element(se);
  auto filtered = square_filter<Op>(mask.bits(), mask.width(), mask.height(), 1, se.radius);
  BinaryMask out(mask.width(), mask.height());
  std::copy(filtered.begin(), filtered.end(), out.bits().begin());
  return out;
}

template <typename Op>
RasterImage filter_image(const RasterImage& image, StructuringElement se) {
  check_element(se);
  return RasterImage(image.width(), image.height(), image.channels(),
                     square_filter<Op>(image.data(), image.width(), image.height(),
                                       image.channels(), se.radius));
}

template <typename Raster>
Raster run_preprocess(const Raster& input, const MorphologyConfig& config) {
  if (config.passes < 0) {
    throw Error(ErrorCode::InvalidArgument, "morphology passes must be >= 0");
  }
  Raster out = input;
  for (int i = 0; i < config.passes; ++i) out = erode(out, config.element);
  for (int i = 0; i < config.passes; ++i) out = dilate(out, config.element);
  return out;
}

}  // namespace

StructuringElement StructuringElement::square(int radius) {
  StructuringElement se{radius};
  check_element(se);
  return se;
}

BinaryMask erode(const BinaryMask& mask, StructuringElement se) {
  return filter_mask<MinOp>(mask, se);
}

BinaryMask dilate(const BinaryMask& mask, StructuringElement se) {
  return filter_mask<MaxOp>(mask, se);
}

RasterImage erode(const RasterImage& image, StructuringElement se) {
  return filter_image<MinOp>(image, se);
}

RasterImage dilate(const RasterImage& image, StructuringElement se) {
  return filter_image<MaxOp>(image, se);
}

BinaryMask opening(const BinaryMask& mask, StructuringElement se) {
  return dilate(erode(mask, se), se);
}

RasterImage preprocess(const RasterImage& image, const MorphologyConfig& config) {
  return run_preprocess(image, config);
}

BinaryMask preprocess(const BinaryMask& mask, const MorphologyConfig& config) {
  return run_preprocess(mask, config);
}

}  // namespace plantsam
