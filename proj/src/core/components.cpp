// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/components.hpp"

#include <algorithm>
#include <string>

#include "plantsam/error.hpp"

namespace plantsam {

Connectivity parse_connectivity(int value) {
  if (value == 4) return Connectivity::Four;
  if (value == 8) return Connectivity::Eight;
  throw Error(ErrorCode::InvalidArgument,
              "connectivity must be 4 or 8, got " + std::to_string(value));
}

ComponentLabels label_components(const BinaryMask& mask, Connectivity connectivity) {
  ComponentLabels result;
  result.width = mask.width();
  result.height = mask.height();
  result.labels.assign(mask.pixel_count(), 0);
  if (mask.empty()) return result;

  static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int neighbours = connectivity == Connectivity::Four ? 4 : 8;
  const int w = mask.width();
  const int h = mask.height();

  std::vector<int> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t seed = static_cast<std::size_t>(y) * w + x;
      if (!mask.get(x, y) || result.labels[seed] != 0) continue;

      ConnectedComponent component;
      component.label = static_cast<int>(result.components.size()) + 1;
      component.bbox = {x, y, x, y, 1.0};
      result.labels[seed] = component.label;
      stack.push_back(static_cast<int>(seed));
      while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const int px = idx % w;
        const int py = idx / w;
        ++component.pixel_count;
        component.bbox.x_min = std::min(component.bbox.x_min, px);
        component.bbox.x_max = std::max(component.bbox.x_max, px);
        component.bbox.y_min = std::min(component.bbox.y_min, py);
        component.bbox.y_max = std::max(component.bbox.y_max, py);
        for (int n = 0; n < neighbours; ++n) {
          const int nx = px + kDx[n];
          const int ny = py + kDy[n];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h || !mask.get(nx, ny)) continue;
          const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
          if (result.labels[nidx] != 0) continue;
          result.labels[nidx] = component.label;
          stack.push_back(static_cast<int>(nidx));
        }
      }
      result.components.push_back(component);
    }
  }
  return result;
}

std::vector<ConnectedComponent> connected_components(const BinaryMask& mask,
                                                     Connectivity connectivity) {
  return label_components(mask, connectivity).components;
}

BinaryMask mask_from_nonblack(const RasterImage& image, int threshold) {
  if (threshold < 0 || threshold > 255) {
    throw Error(ErrorCode::InvalidArgument,
                "non-black threshold must be in [0, 255], got " + std::to_string(threshold));
  }
  BinaryMask out(image.width(), image.height());
  const auto src = image.data();
  auto dst = out.bits();
  const int channels = image.channels();
  const auto n = static_cast<std::ptrdiff_t>(dst.size());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    int peak = 0;
    for (int c = 0; c < channels; ++c) peak = std::max<int>(peak, src[i * channels + c]);
    dst[i] = peak > threshold ? 1 : 0;
  }
  return out;
}

}  // namespace plantsam
