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

#ifndef REDVE_DENOISERS_DENOISER_HPP_
#define REDVE_DENOISERS_DENOISER_HPP_

#include <functional>
#include <memory>
#include <span>
#include <string>

#include "redve/denoisers/patch_weighted.hpp"
#include "redve/errors.hpp"
#include "redve/imaging/fft.hpp"
#include "redve/imaging/operator.hpp"
#include "redve/imaging/psf.hpp"
#include "redve/linalg.hpp"

namespace redve::denoisers {

/// Type-erased denoising engine on a flattened image of fixed shape. Must be
/// reentrant: it is called concurrently when independent solves share it.
using DenoiserFn = std::function<Vector(std::span<const double>)>;

enum class DenoiserKind { Identity, GaussianFilter, PatchWeighted };

struct DenoiserSpec {
  DenoiserKind kind = DenoiserKind::Identity;
  double gaussian_std = 1.0;
  int gaussian_support = 5;  // odd kernel width
  PatchWeightedParams patch;

  static DenoiserSpec identity() { return {}; }
  static DenoiserSpec gaussian(double stddev, int support) {
    DenoiserSpec s;
    s.kind = DenoiserKind::GaussianFilter;
    s.gaussian_std = stddev;
    s.gaussian_support = support;
    return s;
  }
  static DenoiserSpec patch_weighted(int patch_radius, int search_radius, double h) {
    DenoiserSpec s;
    s.kind = DenoiserKind::PatchWeighted;
    s.patch = {patch_radius, search_radius, h};
    return s;
  }

  bool linear() const { return kind != DenoiserKind::PatchWeighted; }
};

inline std::string to_string(DenoiserKind k) {
  switch (k) {
    case DenoiserKind::Identity: return "identity";
    case DenoiserKind::GaussianFilter: return "gaussian";
    case DenoiserKind::PatchWeighted: return "patch-weighted";
  }
  return "?";
}

/**
 * A denoiser bound to an image shape.
 *
 * Identity returns its input. GaussianFilter is circular convolution with a
 * normalized Gaussian kernel: a fixed symmetric row-stochastic W, f(x) = W x.
 * PatchWeighted is the non-local means smoother of patch_weighted.hpp.
 */
class Denoiser {
 public:
  Denoiser(DenoiserSpec spec, int width, int height)
      : spec_(spec), width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw InvalidArgument("Denoiser: dimensions must be positive");
    if (spec_.kind == DenoiserKind::GaussianFilter) {
      const imaging::Psf k =
          imaging::make_psf(imaging::PsfKind::Gaussian, spec_.gaussian_support, spec_.gaussian_std);
      fft_ = std::make_shared<const imaging::Fft2d>(width, height);
      transfer_ = std::make_shared<const imaging::ComplexVector>(imaging::psf_transfer(k, *fft_));
    }
  }

  const DenoiserSpec& spec() const { return spec_; }
  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return static_cast<std::size_t>(width_) * height_; }

  Vector operator()(std::span<const double> x) const {
    if (x.size() != size()) throw ShapeMismatch("denoise: size mismatch");
    switch (spec_.kind) {
      case DenoiserKind::Identity: return Vector(x.begin(), x.end());
      case DenoiserKind::GaussianFilter: {
        imaging::ComplexVector s = fft_->forward(x);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] *= (*transfer_)[i];
        return fft_->inverse_real(s);
      }
      case DenoiserKind::PatchWeighted:
        return patch_weighted_denoise(x, width_, height_, spec_.patch);
    }
    throw InvalidArgument("denoise: unknown kind");
  }

  DenoiserFn function() const {
    return [self = *this](std::span<const double> x) { return self(x); };
  }

  /// The map z -> W(x) z with the weights frozen at x. Linear kinds return
  /// themselves; for PatchWeighted this is the usual RED linearization.
  DenoiserFn frozen_at(std::span<const double> x) const {
    if (x.size() != size()) throw ShapeMismatch("frozen_at: size mismatch");
    if (spec_.linear()) return function();
    auto kernel = std::make_shared<const PatchKernel>(x, width_, height_, spec_.patch);
    return [kernel](std::span<const double> z) { return kernel->apply(z); };
  }

 private:
  DenoiserSpec spec_;
  int width_;
  int height_;
  std::shared_ptr<const imaging::Fft2d> fft_;
  std::shared_ptr<const imaging::ComplexVector> transfer_;
};

inline Vector denoise(const DenoiserSpec& spec, int width, int height, std::span<const double> x) {
  return Denoiser(spec, width, height)(x);
}

/// Explicit matrix of a linear denoiser: column j is f(e_j).
inline Matrix materialize_dense(const DenoiserSpec& spec, int width, int height) {
  if (!spec.linear()) throw NotLinear("materialize_dense: denoiser is not linear");
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (n > 4096) throw InvalidArgument("materialize_dense: at most 4096 pixels");
  const Denoiser f(spec, width, height);
  Matrix w(n, n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vector col = f(e);
    std::copy(col.begin(), col.end(), w.col(j).begin());
    e[j] = 0.0;
  }
  return w;
}

}  // namespace redve::denoisers

#endif  // REDVE_DENOISERS_DENOISER_HPP_
