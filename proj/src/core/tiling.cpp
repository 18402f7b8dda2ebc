// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/tiling.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>

#include "plantsam/error.hpp"
#include "plantsam/image_io.hpp"

namespace plantsam {

namespace {

void check_plan_matches(const PatchPlan& plan, int width, int height) {
  if (plan.source_width != width || plan.source_height != height) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("plan was built for {}x{} but the raster is {}x{}",
                            plan.source_width, plan.source_height, width, height));
  }
}

template <typename Raster>
void check_tiles(std::span<const Raster> tiles, const PatchPlan& plan) {
  if (static_cast<int>(tiles.size()) != plan.patch_count()) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("expected {} patches ({} x {}), got {}", plan.patch_count(),
                            plan.cols, plan.rows, tiles.size()));
  }
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    if (tiles[i].width() != plan.patch_size || tiles[i].height() != plan.patch_size) {
      throw Error(ErrorCode::DimensionMismatch,
                  fmt::format("patch {} is {}x{}, expected {}x{}", i, tiles[i].width(),
                              tiles[i].height(), plan.patch_size, plan.patch_size));
    }
  }
}

template <typename Raster>
std::vector<Tile<Raster>> split_impl(const Raster& source, const PatchPlan& plan) {
  check_plan_matches(plan, source.width(), source.height());
  std::vector<Tile<Raster>> tiles(static_cast<std::size_t>(plan.patch_count()));
  const int count = plan.patch_count();

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    const int row = i / plan.cols;
    const int col = i % plan.cols;
    const Point o = plan.origin(row, col);
    tiles[i] = {col, row, crop(source, o.x, o.y, plan.patch_size, plan.patch_size)};
  }
  return tiles;
}

}  // namespace

BoundingBox PatchPlan::valid_region(int row, int col) const {
  const Point o = origin(row, col);
  return {o.x, o.y, std::min(o.x + patch_size, source_width) - 1,
          std::min(o.y + patch_size, source_height) - 1, 1.0};
}

std::pair<int, int> PatchPlan::cell_of(Point p) const {
  if (p.x < 0 || p.y < 0 || p.x >= source_width || p.y >= source_height) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("point ({}, {}) outside {}x{} image", p.x, p.y, source_width, source_height));
  }
  return {p.y / patch_size, p.x / patch_size};
}

int select_patch_size(int width) {
  if (width < 1) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("image width must be >= 1, got {}", width));
  }
  const double w = static_cast<double>(width);
  if (w / 1024.0 > 3.0) return 1024;
  if (w / 512.0 > 3.0) return 512;
  return 256;
}

PatchPlan make_plan(int width, int height, int patch_size) {
  if (width < 1 || height < 1 || patch_size < 1) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("invalid plan request {}x{} with patch size {}", width, height,
                            patch_size));
  }
  PatchPlan plan;
  plan.patch_size = patch_size;
  plan.cols = (width + patch_size - 1) / patch_size;
  plan.rows = (height + patch_size - 1) / patch_size;
  plan.pad_right = plan.cols * patch_size - width;
  plan.pad_bottom = plan.rows * patch_size - height;
  plan.source_width = width;
  plan.source_height = height;
  return plan;
}

PatchPlan plan_for(int width, int height) {
  return make_plan(width, height, select_patch_size(width));
}

std::vector<Patch> split(const RasterImage& image, const PatchPlan& plan) {
  return split_impl(image, plan);
}

std::vector<MaskPatch> split(const BinaryMask& mask, const PatchPlan& plan) {
  return split_impl(mask, plan);
}

BinaryMask stitch(std::span<const BinaryMask> masks, const PatchPlan& plan) {
  check_tiles(masks, plan);
  BinaryMask out(plan.source_width, plan.source_height);
  const int s = plan.patch_size;

  // Each output row is written by exactly one thread.
#pragma omp parallel for schedule(static)
  for (int y = 0; y < plan.source_height; ++y) {
    const int row = y / s;
    auto dst = out.bits().subspan(static_cast<std::size_t>(y) * plan.source_width,
                                  static_cast<std::size_t>(plan.source_width));
    for (int col = 0; col < plan.cols; ++col) {
      const BinaryMask& tile = masks[static_cast<std::size_t>(plan.index(row, col))];
      const int x0 = col * s;
      const int n = std::min(s, plan.source_width - x0);
      auto src = tile.bits().subspan(static_cast<std::size_t>(y - row * s) * s,
                                     static_cast<std::size_t>(n));
      std::copy(src.begin(), src.end(), dst.begin() + x0);
    }
  }
  return out;
}

RasterImage stitch(std::span<const RasterImage> patches, const PatchPlan& plan) {
  check_tiles(patches, plan);
  const int channels = patches.front().channels();
  for (const auto& p : patches) {
    if (p.channels() != channels) {
      throw Error(ErrorCode::DimensionMismatch, "patches have mixed channel counts");
    }
  }
  RasterImage out(plan.source_width, plan.source_height, channels);
  const int s = plan.patch_size;

#pragma omp parallel for schedule(static)
  for (int y = 0; y < plan.source_height; ++y) {
    const int row = y / s;
    auto dst = out.row(y);
    for (int col = 0; col < plan.cols; ++col) {
      const RasterImage& tile = patches[static_cast<std::size_t>(plan.index(row, col))];
      const int x0 = col * s;
      const int n = std::min(s, plan.source_width - x0);
      auto src = tile.row(y - row * s).first(static_cast<std::size_t>(n * channels));
      std::copy(src.begin(), src.end(), dst.begin() + static_cast<std::ptrdiff_t>(x0 * channels));
    }
  }
  return out;
}

std::string plan_to_json(const PatchPlan& plan) {
  nlohmann::ordered_json j;
  j["patch_size"] = plan.patch_size;
  j["cols"] = plan.cols;
  j["rows"] = plan.rows;
  j["pad_right"] = plan.pad_right;
  j["pad_bottom"] = plan.pad_bottom;
  j["source_width"] = plan.source_width;
  j["source_height"] = plan.source_height;
  return j.dump(2) + "\n";
}

PatchPlan plan_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    PatchPlan plan;
    plan.patch_size = j.at("patch_size").get<int>();
    plan.cols = j.at("cols").get<int>();
    plan.rows = j.at("rows").get<int>();
    plan.pad_right = j.at("pad_right").get<int>();
    plan.pad_bottom = j.at("pad_bottom").get<int>();
    plan.source_width = j.at("source_width").get<int>();
    plan.source_height = j.at("source_height").get<int>();
    if (plan != make_plan(plan.source_width, plan.source_height, plan.patch_size)) {
      throw Error(ErrorCode::InvalidArgument, "plan fields are inconsistent");
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed plan JSON: ") + e.what());
  }
}

void write_patch_dump(const std::filesystem::path& dir, const std::string& image_id,
                      std::span<const Patch> patches, const PatchPlan& plan) {
  std::filesystem::create_directories(dir);
  for (const auto& patch : patches) {
    save_png(dir / fmt::format("{}_r{}_c{}.png", image_id, patch.grid_row, patch.grid_col),
             patch.pixels);
  }
  std::ofstream out(dir / (image_id + ".plan.json"));
  out << plan_to_json(plan);
  if (!out) throw Error(ErrorCode::Io, "cannot write plan sidecar in " + dir.string());
}

}  // namespace plantsam
