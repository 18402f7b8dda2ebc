// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace plantsam::testing {

BinaryMask brute_erode(const BinaryMask& m, int r) {
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      bool all = true;
      for (int dy = -r; dy <= r && all; ++dy) {
        for (int dx = -r; dx <= r && all; ++dx) {
          all = m.in_bounds(x + dx, y + dy) && m.get(x + dx, y + dy);
        }
      }
      out.set(x, y, all);
    }
  }
  return out;
}

BinaryMask brute_dilate(const BinaryMask& m, int r) {
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      bool any = false;
      for (int dy = -r; dy <= r && !any; ++dy) {
        for (int dx = -r; dx <= r && !any; ++dx) {
          any = m.in_bounds(x + dx, y + dy) && m.get(x + dx, y + dy);
        }
      }
      out.set(x, y, any);
    }
  }
  return out;
}

std::vector<OracleComponent> canonical(std::vector<OracleComponent> v) {
  std::sort(v.begin(), v.end(), [](const OracleComponent& a, const OracleComponent& b) {
    return std::tie(a.box.y_min, a.box.x_min, a.box.y_max, a.box.x_max, a.pixels) <
           std::tie(b.box.y_min, b.box.x_min, b.box.y_max, b.box.x_max, b.pixels);
  });
  return v;
}

std::vector<OracleComponent> relaxation_components(const BinaryMask& m, Connectivity c) {
  const int w = m.width();
  const int h = m.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, 0);
  for (int i = 0; i < w * h; ++i) {
    if (m.get(i % w, i / w)) label[static_cast<std::size_t>(i)] = i + 1;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        int& l = label[static_cast<std::size_t>(y * w + x)];
        if (l == 0) continue;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (c == Connectivity::Four && dx != 0 && dy != 0) continue;
            const int nx = x + dx;
            const int ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const int n = label[static_cast<std::size_t>(ny * w + nx)];
            if (n != 0 && n < l) {
              l = n;
              changed = true;
            }
          }
        }
      }
    }
  }
  std::map<int, OracleComponent> groups;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int l = label[static_cast<std::size_t>(y * w + x)];
      if (l == 0) continue;
      auto [it, fresh] = groups.try_emplace(l, OracleComponent{{x, y, x, y, 1.0}, 0});
      auto& b = it->second.box;
      b.x_min = std::min(b.x_min, x);
      b.y_min = std::min(b.y_min, y);
      b.x_max = std::max(b.x_max, x);
      b.y_max = std::max(b.y_max, y);
      ++it->second.pixels;
    }
  }
  std::vector<OracleComponent> out;
  for (auto& [l, comp] : groups) out.push_back(comp);
  return canonical(std::move(out));
}

PixelCounts count_pixels(const BinaryMask& pred, const BinaryMask& truth) {
  PixelCounts c;
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      const bool p = pred.get(x, y);
      const bool t = truth.get(x, y);
      c.intersection += (p && t) ? 1 : 0;
      c.unite += (p || t) ? 1 : 0;
      c.pred += p ? 1 : 0;
      c.truth += t ? 1 : 0;
    }
  }
  return c;
}

double brute_iou(const BinaryMask& pred, const BinaryMask& truth) {
  const PixelCounts c = count_pixels(pred, truth);
  return c.unite == 0 ? 1.0 : c.intersection / c.unite;
}

double brute_dice(const BinaryMask& pred, const BinaryMask& truth) {
  const PixelCounts c = count_pixels(pred, truth);
  return c.pred + c.truth == 0 ? 1.0 : 2.0 * c.intersection / (c.pred + c.truth);
}

}  // namespace plantsam::testing
