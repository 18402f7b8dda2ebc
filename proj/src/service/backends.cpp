// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/service/backends.hpp"

#include "plantsam/error.hpp"
#include "plantsam/image_io.hpp"
#include "plantsam/model_adapters.hpp"
#include "plantsam/reference_segmenter.hpp"

namespace plantsam::service {

namespace {

constexpr std::string_view kModelPrefix = "model:";

std::optional<std::filesystem::path> model_path(const std::string& name) {
  if (!name.starts_with(kModelPrefix)) return std::nullopt;
  return std::filesystem::path(name.substr(kModelPrefix.size()));
}

void require_model_file(const std::string& kind, const std::filesystem::path& path) {
  if (path.empty()) throw Error(ErrorCode::InvalidArgument, kind + " model path is empty");
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(ErrorCode::InvalidArgument, kind + " model not found: " + path.string());
  }
}

}  // namespace

void validate_detector_name(const std::string& name) {
  if (name == "heuristic" || name == "oracle") return;
  if (auto path = model_path(name)) return require_model_file("detector", *path);
  throw Error(ErrorCode::InvalidArgument, "unknown detector '" + name + "'");
}

void validate_segmenter_name(const std::string& name) {
  if (name == "reference") return;
  if (auto path = model_path(name)) return require_model_file("segmenter", *path);
  throw Error(ErrorCode::InvalidArgument, "unknown segmenter '" + name + "'");
}

std::unique_ptr<Detector> make_detector(const std::string& name,
                                        const std::optional<std::filesystem::path>& oracle_mask,
                                        const DetectorConfig& config) {
  validate_detector_name(name);
  if (name == "heuristic") return std::make_unique<HeuristicDetector>(HeuristicDetectorConfig{}, config);
  if (name == "oracle") {
    if (!oracle_mask) throw Error(ErrorCode::InvalidArgument, "oracle detector needs a mask");
    return std::make_unique<MaskOracleDetector>(load_mask(*oracle_mask), config);
  }
  auto adapter = DetectorAdapterConfig::load(*model_path(name));
  return std::make_unique<ModelDetector>(std::move(adapter), config);
}

std::unique_ptr<Segmenter> make_segmenter(const std::string& name) {
  validate_segmenter_name(name);
  if (name == "reference") return std::make_unique<ReferenceSegmenter>();
  return std::make_unique<ModelSegmenter>(SegmenterAdapterConfig::load(*model_path(name)));
}

}  // namespace plantsam::service
