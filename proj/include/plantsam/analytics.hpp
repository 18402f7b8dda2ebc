// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plantsam/image.hpp"

namespace plantsam {

/// Per-pixel foreground frequency across aligned masks, in [0, 1].
struct HeatMap {
  int width = 0;
  int height = 0;
  std::size_t sample_count = 0;
  /// Row-major, value = masks with foreground at the pixel / sample_count.
  std::vector<float> values;

  float at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

enum class Alignment { Center, None };

Alignment parse_alignment(std::string_view name);

struct CanvasSize {
  int width = 0;
  int height = 0;
};

/// Places each mask on the canvas (centered, or at the top-left corner for
/// Alignment::None; overflow is cropped), sums and normalizes. Without an
/// explicit canvas, the canvas is the largest width by the largest height
/// among the masks.
HeatMap heatmap(std::span<const BinaryMask> masks, std::optional<CanvasSize> canvas = std::nullopt,
                Alignment alignment = Alignment::Center);

/// Fixed 256-entry color ramp: black, indigo, crimson, orange, pale yellow.
const std::array<std::array<std::uint8_t, 3>, 256>& heat_ramp();

/// RGB rendering through heat_ramp(); value v maps to entry round(v * 255).
RasterImage render_heatmap(const HeatMap& map);

/// Raw little-endian float32 values, row-major.
void write_heatmap_values(const std::filesystem::path& path, const HeatMap& map);
std::vector<float> read_heatmap_values(const std::filesystem::path& path);

struct CoverageStat {
  std::string taxon;
  double plant_pct = 0.0;
  double background_pct = 0.0;
  std::size_t image_count = 0;
};

/// Mean plant fraction per taxon as percentages, sorted by plant_pct
/// descending (ties by taxon name). Each group must be non-empty.
std::vector<CoverageStat> coverage(const std::map<std::string, std::vector<BinaryMask>>& groups);

/// Fraction of foreground pixels.
double plant_fraction(const BinaryMask& mask);

/// `taxon,n,plant_pct,background_pct`; the two percents are rounded so
/// they add to exactly 100.00.
std::string coverage_to_csv(std::span<const CoverageStat> stats);

struct CropResult {
  RasterImage image;
  BinaryMask mask;
  BoundingBox box;
};

/// Crops image and mask to the mask's tight box grown by `margin` and clamped
/// to the raster. Background pixels are zeroed unless `keep_background`.
CropResult crop_to_content(const RasterImage& image, const BinaryMask& mask, int margin = 0,
                           bool keep_background = false);

}  // namespace plantsam
