// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <fstream>
#include <string>

#include "plantsam/error.hpp"

namespace plantsam {

namespace {

RasterImage from_mat(const cv::Mat& mat, const std::string& origin) {
  if (mat.empty()) throw Error(ErrorCode::Io, "cannot decode image: " + origin);
  if (mat.depth() != CV_8U) {
    throw Error(ErrorCode::Io, "only 8-bit images are supported: " + origin);
  }
  const int w = mat.cols;
  const int h = mat.rows;
  const int src_channels = mat.channels();
  const int channels = src_channels >= 3 ? 3 : 1;
  RasterImage out(w, h, channels);
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* in = mat.ptr<std::uint8_t>(y);
    auto row = out.row(y);
    for (int x = 0; x < w; ++x) {
      const std::uint8_t* px = in + static_cast<std::ptrdiff_t>(x) * src_channels;
      if (channels == 3) {
        // OpenCV stores BGR(A)
        row[x * 3 + 0] = px[2];
        row[x * 3 + 1] = px[1];
        row[x * 3 + 2] = px[0];
      } else {
        row[x] = px[0];
      }
    }
  }
  return out;
}

cv::Mat to_mat(const RasterImage& image) {
  if (image.empty()) throw Error(ErrorCode::InvalidArgument, "cannot encode an empty image");
  const int type = image.channels() == 3 ? CV_8UC3 : CV_8UC1;
  cv::Mat mat(image.height(), image.width(), type);
  for (int y = 0; y < image.height(); ++y) {
    auto row = image.row(y);
    std::uint8_t* out = mat.ptr<std::uint8_t>(y);
    if (image.channels() == 3) {
      for (int x = 0; x < image.width(); ++x) {
        out[x * 3 + 0] = row[x * 3 + 2];
        out[x * 3 + 1] = row[x * 3 + 1];
        out[x * 3 + 2] = row[x * 3 + 0];
      }
    } else {
      std::copy(row.begin(), row.end(), out);
    }
  }
  return mat;
}

const std::vector<int> kPngParams = {cv::IMWRITE_PNG_COMPRESSION, 6};

}  // namespace

RasterImage load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::NotFound, "no such image: " + path.string());
  }
  return from_mat(cv::imread(path.string(), cv::IMREAD_UNCHANGED), path.string());
}

RasterImage decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw Error(ErrorCode::Io, "cannot decode an empty buffer");
  cv::Mat buffer(1, static_cast<int>(bytes.size()), CV_8UC1,
                 const_cast<std::uint8_t*>(bytes.data()));
  return from_mat(cv::imdecode(buffer, cv::IMREAD_UNCHANGED), "<memory>");
}

std::vector<std::uint8_t> encode_png(const RasterImage& image) {
  std::vector<std::uint8_t> bytes;
  if (!cv::imencode(".png", to_mat(image), bytes, kPngParams)) {
    throw Error(ErrorCode::Io, "PNG encoding failed");
  }
  return bytes;
}

void save_png(const std::filesystem::path& path, const RasterImage& image) {
  const auto bytes = encode_png(image);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

BinaryMask image_to_mask(const RasterImage& image) {
  BinaryMask mask(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      bool on = false;
      for (int c = 0; c < image.channels(); ++c) on = on || image.at(x, y, c) != 0;
      mask.set(x, y, on);
    }
  }
  return mask;
}

BinaryMask load_mask(const std::filesystem::path& path) {
  return image_to_mask(load_image(path));
}

BinaryMask decode_mask(std::span<const std::uint8_t> bytes) {
  return image_to_mask(decode_image(bytes));
}

void save_mask(const std::filesystem::path& path, const BinaryMask& mask) {
  save_png(path, mask_to_image(mask));
}

std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask) {
  return encode_png(mask_to_image(mask));
}

}  // namespace plantsam
