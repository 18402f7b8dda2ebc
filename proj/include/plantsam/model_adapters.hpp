// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Adapters around exported ONNX models, run through OpenCV's dnn module.
// Each adapter is described by a small JSON config; relative model paths are
// resolved against the config file's directory.

#include <array>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "plantsam/detectors.hpp"
#include "plantsam/segmentation.hpp"

namespace plantsam {

/// How patch pixels become network input.
///  - Constants: (pixel - mean[c]) / std[c] per RGB channel.
///  - PerPatch: each channel standardized to zero mean, unit variance.
struct InputNormalization {
  enum class Mode { Constants, PerPatch } mode = Mode::Constants;
  std::array<float, 3> mean{0.f, 0.f, 0.f};
  std::array<float, 3> std{255.f, 255.f, 255.f};
};

/// NCHW float tensor (batch 1, RGB) of `patch` resized to size x size.
std::vector<float> make_input_tensor(const RasterImage& patch, int size,
                                     const InputNormalization& norm);

struct DetectorAdapterConfig {
  std::filesystem::path model;
  std::string input_name = "images";
  int input_size = 640;
  InputNormalization normalization{};
  /// Overrides DetectorConfig::confidence_threshold when set (>= 0).
  double confidence_threshold = -1.0;

  /// Reads `path`; a bare `.onnx` path yields defaults around that model.
  static DetectorAdapterConfig load(const std::filesystem::path& path);
};

/// Decodes rows of [x1, y1, x2, y2, score, ...] in network-input pixels into
/// patch-space boxes.
std::vector<BoundingBox> decode_detections(const float* rows, int count, int stride,
                                           int input_size, int patch_width, int patch_height);

/// Detection model with one image input and an [1, N, >=5] output.
class ModelDetector final : public Detector {
 public:
  ModelDetector(DetectorAdapterConfig adapter, DetectorConfig config = {});
  ~ModelDetector() override;

  std::vector<BoundingBox> detect(const PatchView& patch) const override;
  using Detector::detect;
  std::string name() const override { return "model"; }
  bool reentrant() const override { return false; }

 private:
  struct Net;
  DetectorAdapterConfig adapter_;
  DetectorConfig config_;
  std::unique_ptr<Net> net_;
};

struct SegmenterAdapterConfig {
  std::filesystem::path encoder;
  std::filesystem::path decoder;
  int input_size = 1024;
  InputNormalization normalization{InputNormalization::Mode::Constants,
                                   {123.675f, 116.28f, 103.53f},
                                   {58.395f, 57.12f, 57.375f}};
  std::string encoder_input = "image";
  std::string embeddings_input = "image_embeddings";
  std::string coords_input = "point_coords";
  std::string labels_input = "point_labels";
  std::string mask_output = "masks";
  float mask_threshold = 0.0f;
  /// Feeds the extra decoder inputs of the reference export
  /// (mask_input, has_mask_input, orig_im_size).
  bool sam_extras = true;
  /// Appends a (0, 0) point with label -1 when no box is present.
  bool pad_point = true;
  int native_mask_resolution = 256;

  static SegmenterAdapterConfig load(const std::filesystem::path& path);
};

/// Prompt points in network-input coordinates and their labels
/// (1 positive, 0 negative, 2/3 box corners, -1 padding).
struct EncodedPrompt {
  std::vector<float> coords;
  std::vector<float> labels;
};

/// One decoder call per box (points shared across calls); a single call with
/// points only when there are no boxes.
std::vector<EncodedPrompt> encode_prompts(const PromptSet& prompts, int patch_size, int input_size,
                                          bool pad_point);

/// Encoder/decoder promptable segmentation export.
class ModelSegmenter final : public Segmenter {
 public:
  explicit ModelSegmenter(SegmenterAdapterConfig adapter);
  ~ModelSegmenter() override;

  SegmenterCapabilities capabilities() const override;
  SegmentationResult segment(const RasterImage& patch, const PromptSet& prompts) const override;
  std::string name() const override { return "model"; }
  bool reentrant() const override { return false; }

 private:
  struct Nets;
  SegmenterAdapterConfig adapter_;
  std::unique_ptr<Nets> nets_;
};

}  // namespace plantsam
