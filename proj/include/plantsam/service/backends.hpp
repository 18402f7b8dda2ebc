// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "plantsam/detectors.hpp"
#include "plantsam/segmentation.hpp"

namespace plantsam::service {

// Backend names:
//   detector:  heuristic | oracle | model:<adapter.json or .onnx>
//   segmenter: reference | model:<adapter.json>

/// Throws InvalidArgument for an unknown name or a model path that does not exist.
void validate_detector_name(const std::string& name);
void validate_segmenter_name(const std::string& name);

/// `oracle_mask` is required for the oracle detector and ignored otherwise.
std::unique_ptr<Detector> make_detector(const std::string& name,
                                        const std::optional<std::filesystem::path>& oracle_mask,
                                        const DetectorConfig& config = {});

std::unique_ptr<Segmenter> make_segmenter(const std::string& name);

}  // namespace plantsam::service
