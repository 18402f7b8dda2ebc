// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>

#include <unistd.h>

namespace plantsam::testing {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint8_t clamp8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

void thick_line(BinaryMask& m, double x0, double y0, double x1, double y1, int r) {
  const double len = std::hypot(x1 - x0, y1 - y0);
  const int steps = std::max(1, static_cast<int>(len));
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    fill_disc(m, static_cast<int>(std::lround(x0 + t * (x1 - x0))),
              static_cast<int>(std::lround(y0 + t * (y1 - y0))), r);
  }
}

void fill_ellipse(BinaryMask& m, double cx, double cy, double a, double b, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const int reach = static_cast<int>(std::ceil(std::max(a, b)));
  for (int y = static_cast<int>(cy) - reach; y <= static_cast<int>(cy) + reach; ++y) {
    for (int x = static_cast<int>(cx) - reach; x <= static_cast<int>(cx) + reach; ++x) {
      if (!m.in_bounds(x, y)) continue;
      const double dx = x - cx;
      const double dy = y - cy;
      const double u = (dx * c + dy * s) / a;
      const double v = (-dx * s + dy * c) / b;
      if (u * u + v * v <= 1.0) m.set(x, y, true);
    }
  }
}

// One connected plant inside the given region.
void draw_plant(BinaryMask& m, int x0, int y0, int x1, int y1, std::mt19937_64& rng) {
  const int w = x1 - x0;
  const int h = y1 - y0;
  const int stem_r = std::max(2, std::min(w, h) / 80);
  double x = x0 + w * (0.35 + 0.3 * unit(rng));
  double y = y1 - h * 0.05;
  const int segments = uniform(rng, 3, 6);
  const double seg_len = h * 0.85 / segments;
  for (int i = 0; i < segments; ++i) {
    const double nx = std::clamp(x + (unit(rng) - 0.5) * seg_len * 0.6, x0 + w * 0.2, x1 - w * 0.2);
    const double ny = y - seg_len;
    thick_line(m, x, y, nx, ny, stem_r);
    const int leaves = uniform(rng, 1, 2);
    for (int k = 0; k < leaves; ++k) {
      const double side = (k % 2 == 0) ? 1.0 : -1.0;
      const double a = std::max(6.0, w * (0.10 + 0.08 * unit(rng)));
      const double b = a * (0.3 + 0.2 * unit(rng));
      const double angle = side * (0.3 + 0.6 * unit(rng));
      const double lx = std::clamp(nx + side * a * 0.8, x0 + a, x1 - a);
      fill_ellipse(m, lx, ny, a, b, angle);
      thick_line(m, nx, ny, lx, ny, std::max(1, stem_r - 1));
    }
    x = nx;
    y = ny;
  }
}

}  // namespace

void fill_rect(BinaryMask& m, int x0, int y0, int x1, int y1) {
  for (int y = std::max(0, y0); y <= std::min(m.height() - 1, y1); ++y) {
    for (int x = std::max(0, x0); x <= std::min(m.width() - 1, x1); ++x) m.set(x, y, true);
  }
}

void fill_disc(BinaryMask& m, int cx, int cy, int r) {
  for (int y = cy - r; y <= cy + r; ++y) {
    for (int x = cx - r; x <= cx + r; ++x) {
      if (m.in_bounds(x, y) && (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) m.set(x, y, true);
    }
  }
}

RasterImage paper(int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RasterImage img(width, height, 3);
  const int base[3] = {232, 226, 208};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int jitter = uniform(rng, -8, 8);
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = clamp8(base[c] + jitter);
    }
  }
  return img;
}

BinaryMask plant_stencil(int width, int height, int components, std::mt19937_64& rng) {
  BinaryMask out(width, height);
  const int gap = 12;
  const int slot = width / components;
  for (int i = 0; i < components; ++i) {
    const int x0 = i * slot + (i > 0 ? gap / 2 : 0) + width / 40;
    const int x1 = (i + 1) * slot - (i + 1 < components ? gap / 2 : 0) - width / 40;
    draw_plant(out, x0, height / 10, x1, height - height / 10, rng);
  }
  return out;
}

RasterImage composite(const RasterImage& background, const BinaryMask& stencil, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  RasterImage out = background;
  const int green[3] = {46, 78, 34};
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      if (!stencil.get(x, y)) continue;
      const int jitter = uniform(rng, -6, 6);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = clamp8(green[c] + jitter);
    }
  }
  return out;
}

SyntheticSheet make_sheet(std::uint64_t seed, const SheetOptions& options) {
  std::mt19937_64 rng(seed);
  SyntheticSheet sheet;
  sheet.truth = plant_stencil(options.width, options.height, options.components, rng);
  sheet.image = composite(paper(options.width, options.height, seed + 1), sheet.truth, seed);
  if (options.clutter) {
    // Label block in the lower right corner and a color bar along the top.
    const int lx = options.width * 3 / 4;
    const int ly = options.height * 17 / 20;
    for (int y = ly; y < options.height - 10; ++y) {
      for (int x = lx; x < options.width - 10; ++x) {
        if (sheet.truth.get(x, y)) continue;
        const bool ink = ((x / 6) % 4 == 0) && ((y / 9) % 3 == 0);
        for (int c = 0; c < 3; ++c) sheet.image.at(x, y, c) = ink ? 30 : 250;
      }
    }
  }
  return sheet;
}

TwoBlobFixture two_blob() {
  TwoBlobFixture f;
  f.image = paper(256, 256, 7);
  f.plant = BinaryMask(256, 256);
  f.artifact = BinaryMask(256, 256);
  fill_disc(f.plant, 70, 128, 40);
  fill_rect(f.artifact, 165, 103, 214, 152);
  for (int y = 0; y < 256; ++y) {
    for (int x = 0; x < 256; ++x) {
      if (f.plant.get(x, y)) {
        f.image.at(x, y, 0) = 40;
        f.image.at(x, y, 1) = 72;
        f.image.at(x, y, 2) = 30;
      } else if (f.artifact.get(x, y)) {
        f.image.at(x, y, 0) = 150;
        f.image.at(x, y, 1) = 110;
        f.image.at(x, y, 2) = 110;
      }
    }
  }
  f.plant_point = {70, 128};
  f.artifact_point = {190, 128};
  return f;
}

BinaryMask random_mask(int width, int height, double density, std::mt19937_64& rng) {
  BinaryMask m(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) m.set(x, y, unit(rng) < density);
  }
  return m;
}

BinaryMask blob_mask(int width, int height, int shapes, std::mt19937_64& rng) {
  BinaryMask m(width, height);
  for (int i = 0; i < shapes; ++i) {
    const int x = uniform(rng, 0, width - 1);
    const int y = uniform(rng, 0, height - 1);
    if (rng() % 2 == 0) {
      fill_rect(m, x, y, x + uniform(rng, 0, std::max(1, width / 4)), y + uniform(rng, 0, std::max(1, height / 4)));
    } else {
      fill_disc(m, x, y, uniform(rng, 0, std::max(1, std::min(width, height) / 6)));
    }
  }
  return m;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("plantsam_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace plantsam::testing
