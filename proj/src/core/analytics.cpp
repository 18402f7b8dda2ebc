// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/analytics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "plantsam/error.hpp"

namespace plantsam {

Alignment parse_alignment(std::string_view name) {
  if (name == "center") return Alignment::Center;
  if (name == "none") return Alignment::None;
  throw Error(ErrorCode::InvalidArgument,
              fmt::format("unknown alignment '{}' (expected center or none)", name));
}

HeatMap heatmap(std::span<const BinaryMask> masks, std::optional<CanvasSize> canvas,
                Alignment alignment) {
  if (masks.empty()) throw Error(ErrorCode::InvalidArgument, "heatmap needs at least one mask");
  CanvasSize size{0, 0};
  if (canvas) {
    size = *canvas;
    if (size.width < 1 || size.height < 1) {
      throw Error(ErrorCode::InvalidArgument, "heatmap canvas must be at least 1x1");
    }
  } else {
    for (const auto& m : masks) {
      size.width = std::max(size.width, m.width());
      size.height = std::max(size.height, m.height());
    }
  }

  const std::size_t cells = static_cast<std::size_t>(size.width) * size.height;
  std::vector<std::uint32_t> counts(cells, 0);
  for (const auto& m : masks) {
    // Offset of the mask's origin on the canvas; negative means it is cropped.
    const int ox = alignment == Alignment::Center ? (size.width - m.width()) / 2 : 0;
    const int oy = alignment == Alignment::Center ? (size.height - m.height()) / 2 : 0;
    const int y0 = std::max(0, oy);
    const int y1 = std::min(size.height, oy + m.height());
    const int x0 = std::max(0, ox);
    const int x1 = std::min(size.width, ox + m.width());

#pragma omp parallel for schedule(static)
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        counts[static_cast<std::size_t>(y) * size.width + x] += m.get(x - ox, y - oy);
      }
    }
  }

  HeatMap map;
  map.width = size.width;
  map.height = size.height;
  map.sample_count = masks.size();
  map.values.resize(cells);
  const double n = static_cast<double>(masks.size());
  for (std::size_t i = 0; i < cells; ++i) {
    map.values[i] = static_cast<float>(static_cast<double>(counts[i]) / n);
  }
  return map;
}

const std::array<std::array<std::uint8_t, 3>, 256>& heat_ramp() {
  static const auto table = [] {
    struct Stop {
      int at;
      int r, g, b;
    };
    constexpr Stop stops[] = {{0, 0, 0, 0},
                              {64, 60, 15, 110},
                              {128, 190, 40, 70},
                              {192, 250, 140, 20},
                              {255, 252, 255, 170}};
    std::array<std::array<std::uint8_t, 3>, 256> lut{};
    for (std::size_t s = 0; s + 1 < std::size(stops); ++s) {
      const Stop a = stops[s];
      const Stop b = stops[s + 1];
      const int span = b.at - a.at;
      for (int i = a.at; i <= b.at; ++i) {
        const int t = i - a.at;
        auto lerp = [&](int u, int v) {
          return static_cast<std::uint8_t>((u * (span - t) + v * t + span / 2) / span);
        };
        lut[static_cast<std::size_t>(i)] = {lerp(a.r, b.r), lerp(a.g, b.g), lerp(a.b, b.b)};
      }
    }
    return lut;
  }();
  return table;
}

RasterImage render_heatmap(const HeatMap& map) {
  RasterImage out(map.width, map.height, 3);
  const auto& lut = heat_ramp();
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      const float v = std::clamp(map.at(x, y), 0.0f, 1.0f);
      const auto& rgb = lut[static_cast<std::size_t>(std::lround(v * 255.0f))];
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = rgb[static_cast<std::size_t>(c)];
    }
  }
  return out;
}

void write_heatmap_values(const std::filesystem::path& path, const HeatMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  for (float v : map.values) {
    std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
    unsigned char le[4] = {static_cast<unsigned char>(bits), static_cast<unsigned char>(bits >> 8),
                           static_cast<unsigned char>(bits >> 16),
                           static_cast<unsigned char>(bits >> 24)};
    out.write(reinterpret_cast<const char*>(le), 4);
  }
}

std::vector<float> read_heatmap_values(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path.string());
  std::vector<float> values;
  unsigned char le[4];
  while (in.read(reinterpret_cast<char*>(le), 4)) {
    const std::uint32_t bits = static_cast<std::uint32_t>(le[0]) |
                               (static_cast<std::uint32_t>(le[1]) << 8) |
                               (static_cast<std::uint32_t>(le[2]) << 16) |
                               (static_cast<std::uint32_t>(le[3]) << 24);
    values.push_back(std::bit_cast<float>(bits));
  }
  return values;
}

double plant_fraction(const BinaryMask& mask) {
  return static_cast<double>(mask.count()) / static_cast<double>(mask.pixel_count());
}

std::vector<CoverageStat> coverage(const std::map<std::string, std::vector<BinaryMask>>& groups) {
  std::vector<CoverageStat> stats;
  for (const auto& [taxon, masks] : groups) {
    if (masks.empty()) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("taxon '{}' has no masks", taxon));
    }
    double sum = 0.0;
    for (const auto& m : masks) sum += plant_fraction(m);
    const double plant = 100.0 * sum / static_cast<double>(masks.size());
    stats.push_back({taxon, plant, 100.0 - plant, masks.size()});
  }
  std::sort(stats.begin(), stats.end(), [](const CoverageStat& a, const CoverageStat& b) {
    if (a.plant_pct != b.plant_pct) return a.plant_pct > b.plant_pct;
    return a.taxon < b.taxon;
  });
  return stats;
}

std::string coverage_to_csv(std::span<const CoverageStat> stats) {
  std::string out = "taxon,n,plant_pct,background_pct\n";
  for (const auto& s : stats) {
    const long long plant = std::llround(s.plant_pct * 100.0);
    const long long background = 10000 - plant;
    out += fmt::format("{},{},{}.{:02d},{}.{:02d}\n", s.taxon, s.image_count, plant / 100,
                       plant % 100, background / 100, background % 100);
  }
  return out;
}

CropResult crop_to_content(const RasterImage& image, const BinaryMask& mask, int margin,
                           bool keep_background) {
  if (image.width() != mask.width() || image.height() != mask.height()) {
    throw Error(ErrorCode::DimensionMismatch, "image and mask sizes differ");
  }
  if (margin < 0) throw Error(ErrorCode::InvalidArgument, "margin must be >= 0");
  const BoundingBox tight = foreground_bounds(mask);
  if (!tight.valid()) throw Error(ErrorCode::InvalidArgument, "cannot crop to an empty mask");

  const BoundingBox box = clamp_to({tight.x_min - margin, tight.y_min - margin,
                                    tight.x_max + margin, tight.y_max + margin, 1.0},
                                   image.width(), image.height());
  CropResult result{crop(image, box.x_min, box.y_min, box.width(), box.height()),
                    crop(mask, box.x_min, box.y_min, box.width(), box.height()), box};
  if (!keep_background) {
    for (int y = 0; y < result.mask.height(); ++y) {
      for (int x = 0; x < result.mask.width(); ++x) {
        if (result.mask.get(x, y)) continue;
        for (int c = 0; c < result.image.channels(); ++c) result.image.at(x, y, c) = 0;
      }
    }
  }
  return result;
}

}  // namespace plantsam
