// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "plantsam/image.hpp"

namespace plantsam {

// PNG and JPEG, 8 bits per channel. Color files load as RGB, grayscale files
// as one channel; alpha is dropped.
RasterImage load_image(const std::filesystem::path& path);
RasterImage decode_image(std::span<const std::uint8_t> bytes);

/// Writes PNG regardless of extension.
void save_png(const std::filesystem::path& path, const RasterImage& image);
std::vector<std::uint8_t> encode_png(const RasterImage& image);

/// Single-channel masks: any nonzero sample is foreground.
BinaryMask load_mask(const std::filesystem::path& path);
BinaryMask decode_mask(std::span<const std::uint8_t> bytes);

/// Stored as 0/255 single-channel PNG.
void save_mask(const std::filesystem::path& path, const BinaryMask& mask);
std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask);

/// Foreground wherever any channel is nonzero.
BinaryMask image_to_mask(const RasterImage& image);

}  // namespace plantsam
