// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "plantsam/image.hpp"

namespace plantsam {

enum class Connectivity { Four = 4, Eight = 8 };

Connectivity parse_connectivity(int value);

struct ConnectedComponent {
  int label = 0;
  std::size_t pixel_count = 0;
  BoundingBox bbox;
};

struct ComponentLabels {
  int width = 0;
  int height = 0;
  /// Row-major label per pixel, 0 for background.
  std::vector<int> labels;
  /// components[i].label == i + 1.
  std::vector<ConnectedComponent> components;

  int at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

/// Labels foreground components 1..K in order of their first pixel in a
/// row-major scan; each component carries a tight bounding box.
ComponentLabels label_components(const BinaryMask& mask,
                                 Connectivity connectivity = Connectivity::Eight);

std::vector<ConnectedComponent> connected_components(
    const BinaryMask& mask, Connectivity connectivity = Connectivity::Eight);

/// Foreground where any channel exceeds `threshold`.
BinaryMask mask_from_nonblack(const RasterImage& image, int threshold = 0);

}  // namespace plantsam
