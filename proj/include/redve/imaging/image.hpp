// Copyright (c) 2026 The redve Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REDVE_IMAGING_IMAGE_HPP_
#define REDVE_IMAGING_IMAGE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>

#include "redve/errors.hpp"
#include "redve/linalg.hpp"

namespace redve::imaging {

/// Grayscale image, row-major, real intensities nominally in [0, 255].
/// Iterates are never clipped; clip() is applied only on export.
struct Image {
  int width = 0;
  int height = 0;
  Vector pixels;

  Image() = default;
  Image(int w, int h, double fill = 0.0) : width(w), height(h), pixels(size_of(w, h), fill) {}
  Image(int w, int h, Vector data) : width(w), height(h), pixels(std::move(data)) {
    if (pixels.size() != size_of(w, h)) throw ShapeMismatch("Image: pixel count does not match shape");
  }

  std::size_t size() const { return pixels.size(); }
  double& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }
  double at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }

  bool same_shape(const Image& o) const { return width == o.width && height == o.height; }

 private:
  static std::size_t size_of(int w, int h) {
    if (w <= 0 || h <= 0) throw InvalidArgument("Image: dimensions must be positive");
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  }
};

inline Image clip(Image img, double lo = 0.0, double hi = 255.0) {
  for (double& v : img.pixels) v = std::clamp(v, lo, hi);
  return img;
}

/**
 * Deterministic grayscale test scene: a shaded background, a five-armed
 * star, discs, a bar, and a sinusoidal texture patch. Edges, flat regions
 * and texture in one image; values stay inside [16, 240].
 */
inline Image synthetic_scene(int width, int height) {
  Image img(width, height);
  const double w = width, h = height;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double x = (c + 0.5) / w, y = (r + 0.5) / h;
      double v = 70.0 + 60.0 * x + 30.0 * y;

      const double sx = x - 0.38, sy = y - 0.42;
      const double rad = std::hypot(sx, sy), ang = std::atan2(sy, sx);
      if (rad < 0.22 + 0.09 * std::cos(5.0 * ang)) v = 205.0 - 120.0 * rad;

      if (std::hypot(x - 0.78, y - 0.22) < 0.11) v = 40.0;
      if (std::hypot(x - 0.80, y - 0.78) < 0.13) v = 225.0 - 60.0 * std::hypot(x - 0.80, y - 0.78);
      if (x > 0.08 && x < 0.55 && y > 0.80 && y < 0.90) v = 30.0;
      if (x > 0.60 && x < 0.95 && y > 0.40 && y < 0.62)
        v = 128.0 + 70.0 * std::sin(2.0 * std::numbers::pi * (9.0 * x + 3.0 * y));
      img.at(r, c) = std::clamp(v, 16.0, 240.0);
    }
  }
  return img;
}

}  // namespace redve::imaging

#endif  // REDVE_IMAGING_IMAGE_HPP_
