// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/dataset.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>

#include "plantsam/components.hpp"
#include "plantsam/error.hpp"
#include "plantsam/image_io.hpp"
#include "plantsam/tiling.hpp"

namespace plantsam {

namespace {

// Uniform integer in [0, bound) by rejection sampling.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

}  // namespace

std::string patch_id(const std::string& image_id, int row, int col) {
  return fmt::format("{}_r{}_c{}", image_id, row, col);
}

std::vector<DatasetPatch> build_detection_dataset(std::span<const SegmentedImage> images,
                                                  const DatasetConfig& config) {
  config.detector.validate();
  std::vector<const SegmentedImage*> ordered;
  for (const auto& img : images) ordered.push_back(&img);
  std::sort(ordered.begin(), ordered.end(),
            [](const SegmentedImage* a, const SegmentedImage* b) { return a->image_id < b->image_id; });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i]->image_id == ordered[i - 1]->image_id) {
      throw Error(ErrorCode::InvalidArgument, "duplicate image id " + ordered[i]->image_id);
    }
  }

  std::vector<std::vector<DatasetPatch>> per_image(ordered.size());
  const int n = static_cast<int>(ordered.size());

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    const SegmentedImage& src = *ordered[static_cast<std::size_t>(i)];
    const RasterImage prepared = preprocess(src.image, config.morphology);
    const PatchPlan plan = plan_for(prepared.width(), prepared.height());
    for (auto& patch : split(prepared, plan)) {
      const BinaryMask plant = mask_from_nonblack(patch.pixels, config.nonblack_threshold);
      DatasetPatch out;
      out.image_id = src.image_id;
      out.grid_row = patch.grid_row;
      out.grid_col = patch.grid_col;
      out.origin = plan.origin(patch.grid_row, patch.grid_col);
      out.annotation.patch_id = patch_id(src.image_id, patch.grid_row, patch.grid_col);
      out.annotation.patch_size = plan.patch_size;
      out.annotation.boxes = component_boxes(plant, config.detector);
      if (out.annotation.boxes.empty() && !config.keep_negatives) continue;
      out.pixels = std::move(patch.pixels);
      per_image[static_cast<std::size_t>(i)].push_back(std::move(out));
    }
  }

  std::vector<DatasetPatch> all;
  for (auto& group : per_image) {
    for (auto& p : group) all.push_back(std::move(p));
  }
  return all;
}

std::string yolo_label(const AnnotationRecord& record) {
  std::string out;
  const double s = record.patch_size;
  for (const auto& b : record.boxes) {
    const double cx = (b.x_min + b.x_max + 1) / 2.0 / s;
    const double cy = (b.y_min + b.y_max + 1) / 2.0 / s;
    out += fmt::format("0 {:.6f} {:.6f} {:.6f} {:.6f}\n", cx, cy, b.width() / s, b.height() / s);
  }
  return out;
}

SplitManifest split_ids(std::vector<std::string> ids, SplitRatios ratios, std::uint64_t seed) {
  const double r[3] = {ratios.train, ratios.val, ratios.test};
  for (double v : r) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, "split ratios must be positive");
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "split ratios must sum to 1");
  }
  if (ids.size() < 3) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("need at least 3 ids to split, got {}", ids.size()));
  }

  std::sort(ids.begin(), ids.end());
  if (auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end()) {
    throw Error(ErrorCode::InvalidArgument, "duplicate id " + *dup);
  }

  std::mt19937_64 rng(seed);
  for (std::size_t i = ids.size() - 1; i > 0; --i) {
    std::swap(ids[i], ids[bounded(rng, i + 1)]);
  }

  const double n = static_cast<double>(ids.size());
  std::size_t counts[3];
  double remainders[3];
  std::size_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    const double exact = n * r[k];
    counts[k] = static_cast<std::size_t>(std::floor(exact));
    remainders[k] = exact - std::floor(exact);
    assigned += counts[k];
  }
  int order[3] = {0, 1, 2};
  std::stable_sort(order, order + 3, [&](int a, int b) { return remainders[a] > remainders[b]; });
  for (std::size_t i = 0; assigned < ids.size(); ++i, ++assigned) ++counts[order[i % 3]];

  SplitManifest m;
  m.seed = seed;
  auto first = ids.begin();
  std::vector<std::string>* targets[3] = {&m.train, &m.val, &m.test};
  for (int k = 0; k < 3; ++k) {
    targets[k]->assign(first, first + static_cast<std::ptrdiff_t>(counts[k]));
    std::sort(targets[k]->begin(), targets[k]->end());
    first += static_cast<std::ptrdiff_t>(counts[k]);
  }
  return m;
}

std::string manifest_to_json(const SplitManifest& manifest) {
  nlohmann::ordered_json j;
  j["seed"] = manifest.seed;
  j["train"] = manifest.train;
  j["val"] = manifest.val;
  j["test"] = manifest.test;
  return j.dump(2) + "\n";
}

SplitManifest manifest_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    SplitManifest m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.train = j.at("train").get<std::vector<std::string>>();
    m.val = j.at("val").get<std::vector<std::string>>();
    m.test = j.at("test").get<std::vector<std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed split manifest: ") + e.what());
  }
}

void write_dataset(const std::filesystem::path& root, std::span<const DatasetPatch> patches,
                   const SplitManifest& manifest) {
  std::map<std::string, std::string> split_of;
  for (const auto& id : manifest.train) split_of[id] = "train";
  for (const auto& id : manifest.val) split_of[id] = "val";
  for (const auto& id : manifest.test) split_of[id] = "test";

  for (const auto& p : patches) {
    const auto it = split_of.find(p.annotation.patch_id);
    if (it == split_of.end()) {
      throw Error(ErrorCode::InvalidArgument,
                  "patch " + p.annotation.patch_id + " is missing from the split manifest");
    }
    save_png(root / "images" / it->second / (p.annotation.patch_id + ".png"), p.pixels);
    const auto label_path = root / "labels" / it->second / (p.annotation.patch_id + ".txt");
    std::filesystem::create_directories(label_path.parent_path());
    std::ofstream out(label_path, std::ios::binary);
    out << yolo_label(p.annotation);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + label_path.string());
  }
  std::filesystem::create_directories(root);
  std::ofstream out(root / "splits.json", std::ios::binary);
  out << manifest_to_json(manifest);
  if (!out) throw Error(ErrorCode::Io, "cannot write splits.json");
}

}  // namespace plantsam
