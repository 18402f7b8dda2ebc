// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/model_adapters.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <opencv2/core.hpp>
#include <opencv2/dnn.hpp>
#include <opencv2/imgproc.hpp>

#include <cmath>
#include <fstream>

#include "plantsam/error.hpp"

namespace plantsam {

namespace {

namespace fs = std::filesystem;

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open adapter config " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("malformed adapter config {}: {}", path.string(), e.what()));
  }
}

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_absolute() ? p : base / p;
}

InputNormalization read_normalization(const nlohmann::json& j, InputNormalization norm) {
  if (j.contains("normalization") && j["normalization"] == "per_patch") {
    norm.mode = InputNormalization::Mode::PerPatch;
  }
  if (j.contains("mean")) norm.mean = j["mean"].get<std::array<float, 3>>();
  if (j.contains("std")) norm.std = j["std"].get<std::array<float, 3>>();
  for (float s : norm.std) {
    if (!(s > 0.f)) throw Error(ErrorCode::InvalidArgument, "normalization std must be > 0");
  }
  return norm;
}

cv::dnn::Net load_net(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::NotFound, "model file not found: " + path.string());
  try {
    cv::dnn::Net net = cv::dnn::readNetFromONNX(path.string());
    if (net.empty()) throw Error(ErrorCode::Backend, "model has no layers: " + path.string());
    return net;
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::Backend, fmt::format("cannot load {}: {}", path.string(), e.what()));
  }
}

cv::Mat tensor_mat(std::vector<float>& data, std::vector<int> shape) {
  return cv::Mat(static_cast<int>(shape.size()), shape.data(), CV_32F, data.data());
}

}  // namespace

std::vector<float> make_input_tensor(const RasterImage& patch, int size,
                                     const InputNormalization& norm) {
  if (patch.empty() || size < 1) throw Error(ErrorCode::InvalidArgument, "bad tensor request");
  cv::Mat src(patch.height(), patch.width(), patch.channels() == 3 ? CV_8UC3 : CV_8UC1,
              const_cast<std::uint8_t*>(patch.data().data()));
  cv::Mat rgb;
  if (patch.channels() == 1) {
    cv::cvtColor(src, rgb, cv::COLOR_GRAY2RGB);
  } else {
    rgb = src;
  }
  cv::Mat resized;
  if (rgb.cols != size || rgb.rows != size) {
    cv::resize(rgb, resized, cv::Size(size, size), 0, 0, cv::INTER_LINEAR);
  } else {
    resized = rgb;
  }

  const std::size_t plane = static_cast<std::size_t>(size) * size;
  std::vector<float> tensor(3 * plane);
  for (int y = 0; y < size; ++y) {
    const std::uint8_t* row = resized.ptr<std::uint8_t>(y);
    for (int x = 0; x < size; ++x) {
      for (int c = 0; c < 3; ++c) {
        tensor[c * plane + static_cast<std::size_t>(y) * size + x] = row[x * 3 + c];
      }
    }
  }

  for (int c = 0; c < 3; ++c) {
    float* ch = tensor.data() + c * plane;
    float mean = norm.mean[c];
    float stdev = norm.std[c];
    if (norm.mode == InputNormalization::Mode::PerPatch) {
      double sum = 0.0;
      double sq = 0.0;
      for (std::size_t i = 0; i < plane; ++i) {
        sum += ch[i];
        sq += static_cast<double>(ch[i]) * ch[i];
      }
      const double m = sum / static_cast<double>(plane);
      const double var = std::max(0.0, sq / static_cast<double>(plane) - m * m);
      mean = static_cast<float>(m);
      stdev = var > 1e-12 ? static_cast<float>(std::sqrt(var)) : 1.f;
    }
    for (std::size_t i = 0; i < plane; ++i) ch[i] = (ch[i] - mean) / stdev;
  }
  return tensor;
}

DetectorAdapterConfig DetectorAdapterConfig::load(const fs::path& path) {
  DetectorAdapterConfig cfg;
  if (path.extension() == ".onnx") {
    cfg.model = path;
    return cfg;
  }
  const auto j = read_json(path);
  const fs::path base = path.parent_path();
  try {
    cfg.model = resolve(base, j.at("model").get<std::string>());
    cfg.input_name = j.value("input_name", cfg.input_name);
    cfg.input_size = j.value("input_size", cfg.input_size);
    cfg.confidence_threshold = j.value("confidence_threshold", cfg.confidence_threshold);
    cfg.normalization = read_normalization(j, cfg.normalization);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("bad detector config {}: {}", path.string(), e.what()));
  }
  if (cfg.input_size < 1) throw Error(ErrorCode::InvalidArgument, "input_size must be >= 1");
  return cfg;
}

std::vector<BoundingBox> decode_detections(const float* rows, int count, int stride,
                                           int input_size, int patch_width, int patch_height) {
  std::vector<BoundingBox> boxes;
  const double sx = static_cast<double>(patch_width) / input_size;
  const double sy = static_cast<double>(patch_height) / input_size;
  for (int i = 0; i < count; ++i) {
    const float* r = rows + static_cast<std::ptrdiff_t>(i) * stride;
    if (!std::isfinite(r[0]) || !std::isfinite(r[1]) || !std::isfinite(r[2]) ||
        !std::isfinite(r[3]) || !std::isfinite(r[4])) {
      continue;
    }
    // Continuous [x1, x2) edges map to inclusive pixel columns.
    BoundingBox b;
    b.x_min = static_cast<int>(std::floor(r[0] * sx));
    b.y_min = static_cast<int>(std::floor(r[1] * sy));
    b.x_max = static_cast<int>(std::ceil(r[2] * sx)) - 1;
    b.y_max = static_cast<int>(std::ceil(r[3] * sy)) - 1;
    b.confidence = std::clamp(static_cast<double>(r[4]), 0.0, 1.0);
    if (b.valid()) boxes.push_back(b);
  }
  return boxes;
}

struct ModelDetector::Net {
  cv::dnn::Net net;
};

ModelDetector::ModelDetector(DetectorAdapterConfig adapter, DetectorConfig config)
    : adapter_(std::move(adapter)), config_(config), net_(std::make_unique<Net>()) {
  if (adapter_.confidence_threshold >= 0.0) config_.confidence_threshold = adapter_.confidence_threshold;
  config_.validate();
  net_->net = load_net(adapter_.model);
}

ModelDetector::~ModelDetector() = default;

std::vector<BoundingBox> ModelDetector::detect(const PatchView& patch) const {
  auto tensor = make_input_tensor(patch.pixels, adapter_.input_size, adapter_.normalization);
  cv::Mat output;
  try {
    net_->net.setInput(tensor_mat(tensor, {1, 3, adapter_.input_size, adapter_.input_size}),
                       adapter_.input_name);
    output = net_->net.forward();
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::Backend, std::string("detector inference failed: ") + e.what());
  }
  if (output.dims != 3 || output.size[0] != 1 || output.size[2] < 5) {
    throw Error(ErrorCode::Backend, "detector output must have shape [1, N, >=5]");
  }
  cv::Mat contiguous = output.isContinuous() ? output : output.clone();
  auto boxes = decode_detections(contiguous.ptr<float>(), output.size[1], output.size[2],
                                 adapter_.input_size, patch.pixels.width(), patch.pixels.height());
  return finalize_boxes(std::move(boxes), patch, config_.confidence_threshold);
}

SegmenterAdapterConfig SegmenterAdapterConfig::load(const fs::path& path) {
  const auto j = read_json(path);
  const fs::path base = path.parent_path();
  SegmenterAdapterConfig cfg;
  try {
    cfg.encoder = resolve(base, j.at("encoder").get<std::string>());
    cfg.decoder = resolve(base, j.at("decoder").get<std::string>());
    cfg.input_size = j.value("input_size", cfg.input_size);
    cfg.encoder_input = j.value("encoder_input", cfg.encoder_input);
    cfg.embeddings_input = j.value("embeddings_input", cfg.embeddings_input);
    cfg.coords_input = j.value("coords_input", cfg.coords_input);
    cfg.labels_input = j.value("labels_input", cfg.labels_input);
    cfg.mask_output = j.value("mask_output", cfg.mask_output);
    cfg.mask_threshold = j.value("mask_threshold", cfg.mask_threshold);
    cfg.sam_extras = j.value("sam_extras", cfg.sam_extras);
    cfg.pad_point = j.value("pad_point", cfg.pad_point);
    cfg.native_mask_resolution = j.value("native_mask_resolution", cfg.native_mask_resolution);
    cfg.normalization = read_normalization(j, cfg.normalization);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("bad segmenter config {}: {}", path.string(), e.what()));
  }
  if (cfg.input_size < 1 || cfg.native_mask_resolution < 0) {
    throw Error(ErrorCode::InvalidArgument, "segmenter sizes must be positive");
  }
  return cfg;
}

std::vector<EncodedPrompt> encode_prompts(const PromptSet& prompts, int patch_size, int input_size,
                                          bool pad_point) {
  const float scale = static_cast<float>(input_size) / static_cast<float>(patch_size);
  // Points map to pixel centres.
  auto px = [&](int v) { return (static_cast<float>(v) + 0.5f) * scale; };

  EncodedPrompt points;
  for (const auto& p : prompts.positive_points) {
    points.coords.insert(points.coords.end(), {px(p.x), px(p.y)});
    points.labels.push_back(1.f);
  }
  for (const auto& p : prompts.negative_points) {
    points.coords.insert(points.coords.end(), {px(p.x), px(p.y)});
    points.labels.push_back(0.f);
  }

  std::vector<EncodedPrompt> calls;
  if (prompts.boxes.empty()) {
    if (points.labels.empty()) return calls;
    if (pad_point) {
      points.coords.insert(points.coords.end(), {0.f, 0.f});
      points.labels.push_back(-1.f);
    }
    calls.push_back(std::move(points));
    return calls;
  }
  for (const auto& b : prompts.boxes) {
    EncodedPrompt call = points;
    call.coords.insert(call.coords.end(), {static_cast<float>(b.x_min) * scale,
                                           static_cast<float>(b.y_min) * scale,
                                           static_cast<float>(b.x_max + 1) * scale,
                                           static_cast<float>(b.y_max + 1) * scale});
    call.labels.insert(call.labels.end(), {2.f, 3.f});
    calls.push_back(std::move(call));
  }
  return calls;
}

struct ModelSegmenter::Nets {
  cv::dnn::Net encoder;
  cv::dnn::Net decoder;
};

ModelSegmenter::ModelSegmenter(SegmenterAdapterConfig adapter)
    : adapter_(std::move(adapter)), nets_(std::make_unique<Nets>()) {
  nets_->encoder = load_net(adapter_.encoder);
  nets_->decoder = load_net(adapter_.decoder);
}

ModelSegmenter::~ModelSegmenter() = default;

SegmenterCapabilities ModelSegmenter::capabilities() const {
  return {true, true, adapter_.native_mask_resolution};
}

SegmentationResult ModelSegmenter::segment(const RasterImage& patch,
                                           const PromptSet& prompts) const {
  const int size = adapter_.input_size;
  auto calls = encode_prompts(prompts, patch.width(), size, adapter_.pad_point);
  try {
    auto tensor = make_input_tensor(patch, size, adapter_.normalization);
    nets_->encoder.setInput(tensor_mat(tensor, {1, 3, size, size}), adapter_.encoder_input);
    cv::Mat embeddings = nets_->encoder.forward().clone();

    BinaryMask merged;
    for (auto& call : calls) {
      const int n = static_cast<int>(call.labels.size());
      nets_->decoder.setInput(embeddings, adapter_.embeddings_input);
      nets_->decoder.setInput(tensor_mat(call.coords, {1, n, 2}), adapter_.coords_input);
      nets_->decoder.setInput(tensor_mat(call.labels, {1, n}), adapter_.labels_input);
      std::vector<float> mask_input;
      std::vector<float> has_mask{0.f};
      std::vector<float> orig_size{static_cast<float>(size), static_cast<float>(size)};
      if (adapter_.sam_extras) {
        mask_input.assign(256 * 256, 0.f);
        nets_->decoder.setInput(tensor_mat(mask_input, {1, 1, 256, 256}), "mask_input");
        nets_->decoder.setInput(tensor_mat(has_mask, {1}), "has_mask_input");
        nets_->decoder.setInput(tensor_mat(orig_size, {2}), "orig_im_size");
      }
      cv::Mat logits = nets_->decoder.forward(adapter_.mask_output);
      if (logits.dims != 4 || logits.size[0] != 1 || logits.size[1] < 1) {
        throw Error(ErrorCode::Backend, "decoder mask output must have shape [1, K, H, W]");
      }
      const int h = logits.size[2];
      const int w = logits.size[3];
      cv::Mat plane = logits.isContinuous() ? logits : logits.clone();
      const float* data = plane.ptr<float>();
      BinaryMask mask(w, h);
      for (int i = 0; i < w * h; ++i) mask.bits()[i] = data[i] > adapter_.mask_threshold ? 1 : 0;
      merged = merged.empty() ? std::move(mask) : mask_union(merged, mask);
    }
    if (merged.empty()) {
      const int res = adapter_.native_mask_resolution > 0 ? adapter_.native_mask_resolution
                                                          : patch.width();
      merged = BinaryMask(res, res);
    }
    const bool any = merged.any();
    return {std::move(merged), any ? 1.0 : 0.0};
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::Backend, std::string("segmenter inference failed: ") + e.what());
  }
}

}  // namespace plantsam
