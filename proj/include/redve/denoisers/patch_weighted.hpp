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

#ifndef REDVE_DENOISERS_PATCH_WEIGHTED_HPP_
#define REDVE_DENOISERS_PATCH_WEIGHTED_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "redve/errors.hpp"
#include "redve/linalg.hpp"

namespace redve::denoisers {

struct PatchWeightedParams {
  int patch_radius = 1;
  int search_radius = 3;
  double h = 25.0;  // intensity scale of the patch distance
};

namespace detail {

inline std::size_t wrap(int i, int n) { return static_cast<std::size_t>(((i % n) + n) % n); }

// Periodic (2r+1) x (2r+1) box mean, separable.
inline void box_mean(std::span<double> img, int width, int height, int r, Vector& scratch) {
  if (r == 0) return;
  scratch.resize(img.size());
  const auto w = static_cast<std::size_t>(width);
  const double inv = 1.0 / (2 * r + 1);
  std::vector<std::size_t> cols(w + 2 * static_cast<std::size_t>(r));
  for (std::size_t c = 0; c < cols.size(); ++c) cols[c] = wrap(static_cast<int>(c) - r, width);
  for (int row = 0; row < height; ++row) {
    const double* in = img.data() + static_cast<std::size_t>(row) * w;
    double* out = scratch.data() + static_cast<std::size_t>(row) * w;
    for (std::size_t col = 0; col < w; ++col) {
      double s = 0.0;
      for (int k = 0; k <= 2 * r; ++k) s += in[cols[col + k]];
      out[col] = s * inv;
    }
  }
  for (int row = 0; row < height; ++row) {
    double* out = img.data() + static_cast<std::size_t>(row) * w;
    std::fill(out, out + w, 0.0);
    for (int k = -r; k <= r; ++k) {
      const double* in = scratch.data() + wrap(row + k, height) * w;
      for (std::size_t col = 0; col < w; ++col) out[col] += in[col];
    }
    for (std::size_t col = 0; col < w; ++col) out[col] *= inv;
  }
}

// dst[i] = src[i + (dx, dy)] with periodic wrap.
inline void shifted(std::span<const double> src, int width, int height, int dx, int dy, std::span<double> dst) {
  const auto w = static_cast<std::size_t>(width);
  const std::size_t shift = wrap(dx, width);
  for (int row = 0; row < height; ++row) {
    const double* in = src.data() + wrap(row + dy, height) * w;
    double* out = dst.data() + static_cast<std::size_t>(row) * w;
    std::copy(in + shift, in + w, out);
    std::copy(in, in + shift, out + (w - shift));
  }
}

}  // namespace detail

/**
 * Patch-similarity kernel of `guide` with periodic boundaries:
 *
 *   K(p, p+o) = exp(-d_p(o)^2 / h^2),
 *
 * where o runs over the search window and d_p(o)^2 is the mean squared
 * difference between the patches around p and p+o. K is symmetric, since
 * d_p(o) = d_{p+o}(-o) holds exactly in floating point.
 *
 * The kernel is normalized symmetrically, W = D K D with D diagonal chosen by
 * Sinkhorn balancing so that every row of W sums to one. W is then a
 * per-pixel weighted average that is also symmetric, which is what makes
 * x - W x the gradient of the frozen-weight prior x^T (x - W x) / 2.
 */
class PatchKernel {
 public:
  static constexpr double kBalanceTolerance = 1e-13;
  static constexpr int kMaxBalanceIterations = 2000;

  PatchKernel(std::span<const double> guide, int width, int height, const PatchWeightedParams& p)
      : width_(width), height_(height) {
    if (width < 1 || height < 1 || guide.size() != static_cast<std::size_t>(width) * height)
      throw ShapeMismatch("PatchKernel: size mismatch");
    if (p.patch_radius < 0 || p.search_radius < 0 || !(p.h > 0.0))
      throw InvalidArgument("PatchKernel: invalid parameters");

    const std::size_t n = guide.size();
    const double inv_h2 = 1.0 / (p.h * p.h);
    const int r = p.search_radius;
    const std::size_t side = static_cast<std::size_t>(2 * r + 1);
    offsets_.reserve(side * side);
    weights_.resize(side * side);
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx) offsets_.push_back({dx, dy});

    // Offsets come in pairs o, -o with K_{-o}(p) = K_o(p - o); the first half
    // of the list (up to and including o = 0) is computed, the rest mirrored.
    const std::size_t center = offsets_.size() / 2;
    Vector scratch;
    for (std::size_t k = 0; k <= center; ++k) {
      const auto [dx, dy] = offsets_[k];
      Vector w(n);
      detail::shifted(guide, width, height, dx, dy, w);
      for (std::size_t i = 0; i < n; ++i) w[i] = (guide[i] - w[i]) * (guide[i] - w[i]);
      detail::box_mean(w, width, height, p.patch_radius, scratch);
      for (double& v : w) v = std::exp(-v * inv_h2);
      weights_[k] = std::move(w);
    }
    for (std::size_t k = center + 1; k < offsets_.size(); ++k) {
      const std::size_t mirror = offsets_.size() - 1 - k;
      const auto [dx, dy] = offsets_[k];
      Vector w(n);
      detail::shifted(weights_[mirror], width, height, dx, dy, w);
      weights_[k] = std::move(w);
    }
    balance();
  }

  std::size_t size() const { return scaling_.size(); }
  int balance_iterations() const { return balance_iterations_; }

  /// W z.
  Vector apply(std::span<const double> z) const {
    if (z.size() != size()) throw ShapeMismatch("PatchKernel::apply: size mismatch");
    Vector scaled(z.begin(), z.end());
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] *= scaling_[i];
    Vector out = apply_kernel(scaled);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= scaling_[i];
    return out;
  }

 private:
  // K v, accumulated offset by offset in a fixed order.
  Vector apply_kernel(std::span<const double> v) const {
    Vector out(v.size(), 0.0);
    const auto w = static_cast<std::size_t>(width_);
    for (std::size_t k = 0; k < offsets_.size(); ++k) {
      const auto [dx, dy] = offsets_[k];
      const std::size_t shift = detail::wrap(dx, width_);
      const double* wk = weights_[k].data();
      for (int row = 0; row < height_; ++row) {
        const std::size_t base = static_cast<std::size_t>(row) * w;
        const double* src = v.data() + detail::wrap(row + dy, height_) * w;
        double* dst = out.data() + base;
        // Columns [0, w - shift) read src[col + shift], the rest wrap around.
        for (std::size_t col = 0; col < w - shift; ++col) dst[col] += wk[base + col] * src[col + shift];
        for (std::size_t col = w - shift; col < w; ++col) dst[col] += wk[base + col] * src[col + shift - w];
      }
    }
    return out;
  }

  // Symmetric Sinkhorn iteration d <- sqrt(d / (K d)); its fixed point has
  // d_i (K d)_i = 1, i.e. unit row sums of D K D. K has a unit diagonal and
  // positive entries, so the iteration converges.
  void balance() {
    scaling_ = apply_kernel(Vector(weights_.front().size(), 1.0));
    for (double& v : scaling_) v = 1.0 / std::sqrt(v);
    for (balance_iterations_ = 0; balance_iterations_ < kMaxBalanceIterations; ++balance_iterations_) {
      const Vector kd = apply_kernel(scaling_);
      double worst = 0.0;
      for (std::size_t i = 0; i < kd.size(); ++i) worst = std::max(worst, std::abs(scaling_[i] * kd[i] - 1.0));
      if (worst <= kBalanceTolerance) return;
      for (std::size_t i = 0; i < kd.size(); ++i) scaling_[i] = std::sqrt(scaling_[i] / kd[i]);
    }
    throw NoConvergence("PatchKernel: Sinkhorn balancing did not converge");
  }

  int width_;
  int height_;
  std::vector<std::pair<int, int>> offsets_;
  std::vector<Vector> weights_;
  Vector scaling_;
  int balance_iterations_ = 0;
};

/// Weights from `guide` applied to `z`; linear in z for a fixed guide.
inline Vector patch_weighted_filter(std::span<const double> guide, std::span<const double> z,
                                    int width, int height, const PatchWeightedParams& p) {
  if (z.size() != guide.size()) throw ShapeMismatch("patch_weighted_filter: size mismatch");
  return PatchKernel(guide, width, height, p).apply(z);
}

inline Vector patch_weighted_denoise(std::span<const double> x, int width, int height,
                                     const PatchWeightedParams& p) {
  return patch_weighted_filter(x, x, width, height, p);
}

}  // namespace redve::denoisers

#endif  // REDVE_DENOISERS_PATCH_WEIGHTED_HPP_
