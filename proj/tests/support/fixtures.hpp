// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "plantsam/image.hpp"

namespace plantsam::testing {

/// Off-white paper with per-pixel jitter of up to +/- 8 levels.
RasterImage paper(int width, int height, std::uint64_t seed);

struct SheetOptions {
  int width = 900;
  int height = 1300;
  /// Separate plant pieces; 1 draws a single connected specimen.
  int components = 1;
  /// Adds a label block and a color bar that are not plant.
  bool clutter = false;
};

struct SyntheticSheet {
  RasterImage image;
  BinaryMask truth;
};

/// Random specimen stencil: a stem polyline with elliptical leaves, drawn in
/// dark green over textured paper.
SyntheticSheet make_sheet(std::uint64_t seed, const SheetOptions& options = {});

/// Stencil only. Pieces are at least 12 px apart.
BinaryMask plant_stencil(int width, int height, int components, std::mt19937_64& rng);

/// Composites `stencil` onto `background` in a dark plant green.
RasterImage composite(const RasterImage& background, const BinaryMask& stencil, std::uint64_t seed);

/// 256x256 sheet holding a dark plant disc (left) and a mid-grey stamp
/// square (right), both inside one patch.
struct TwoBlobFixture {
  RasterImage image;
  BinaryMask plant;
  BinaryMask artifact;
  Point plant_point;
  Point artifact_point;
};
TwoBlobFixture two_blob();

/// Independent pixels with the given foreground probability.
BinaryMask random_mask(int width, int height, double density, std::mt19937_64& rng);

/// Union of a few random filled rectangles and discs.
BinaryMask blob_mask(int width, int height, int shapes, std::mt19937_64& rng);

void fill_rect(BinaryMask& m, int x0, int y0, int x1, int y1);
void fill_disc(BinaryMask& m, int cx, int cy, int r);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

std::string read_bytes(const std::filesystem::path& path);

}  // namespace plantsam::testing
