// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "common.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdio>

#include "plantsam/error.hpp"

namespace plantsam::cli {

Batch::Batch(const GlobalOptions& global, std::string command)
    : global_(global), command_(std::move(command)) {}

void Batch::fail(const std::string& input, const std::string& message) {
  fmt::print(stderr, "error: {}: {}\n", input, message);
  failures_.push_back(input + ": " + message);
  if (!global_.keep_going) throw BatchAborted{};
}

int Batch::finish(Json extra) {
  if (global_.json) {
    Json summary;
    summary["command"] = command_;
    summary["ok"] = failures_.empty();
    summary["items"] = items_;
    summary["failures"] = failures_;
    for (auto& [k, v] : extra.items()) summary[k] = v;
    fmt::print("{}\n", summary.dump(2));
  }
  return failures_.empty() || global_.keep_going ? 0 : 1;
}

std::vector<std::filesystem::path> discover(const std::filesystem::path& dir,
                                            std::initializer_list<const char*> extensions) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::NotFound, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> found;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (std::find_if(extensions.begin(), extensions.end(),
                     [&](const char* e) { return ext == e; }) != extensions.end()) {
      found.push_back(entry.path());
    }
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
  return found;
}

std::vector<std::filesystem::path> discover_images(const std::filesystem::path& dir) {
  return discover(dir, {".png", ".jpg", ".jpeg"});
}

std::vector<std::filesystem::path> discover_masks(const std::filesystem::path& dir) {
  return discover(dir, {".png"});
}

void PipelineFlags::add_morphology(CLI::App& app) {
  app.add_option("--morphology-radius", morphology_radius, "Opening element radius in pixels")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  app.add_option("--morphology-passes", morphology_passes,
                 "Erosions, then as many dilations; 0 disables preprocessing")
      ->check(CLI::Range(0, 16))
      ->capture_default_str();
}

void PipelineFlags::add_components(CLI::App& app) {
  app.add_option("--connectivity", connectivity, "Pixel connectivity for components")
      ->check(CLI::IsMember({4, 8}))
      ->capture_default_str();
  app.add_option("--min-component-pixels", min_component_pixels,
                 "Components smaller than this are not boxed")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

void PipelineFlags::add_detector(CLI::App& app) {
  add_components(app);
  app.add_option("--confidence-threshold", confidence_threshold, "Minimum detector box confidence")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

DetectorConfig PipelineFlags::detector() const {
  DetectorConfig d;
  d.confidence_threshold = confidence_threshold;
  d.min_component_pixels = min_component_pixels;
  d.connectivity = parse_connectivity(connectivity);
  d.validate();
  return d;
}

PipelineConfig PipelineFlags::pipeline() const {
  PipelineConfig p;
  p.morphology.element = StructuringElement::square(morphology_radius);
  p.morphology.passes = morphology_passes;
  p.detector = detector();
  return p;
}

}  // namespace plantsam::cli
