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

#ifndef REDVE_IMAGING_PSNR_HPP_
#define REDVE_IMAGING_PSNR_HPP_

#include <cmath>
#include <limits>
#include <span>

#include "redve/errors.hpp"
#include "redve/imaging/image.hpp"

namespace redve::imaging {

inline constexpr double kPsnrPeak = 255.0;

inline double mse(std::span<const double> x, std::span<const double> reference) {
  if (x.size() != reference.size() || x.empty()) throw ShapeMismatch("mse: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - reference[i];
    s += d * d;
  }
  return s / static_cast<double>(x.size());
}

/// 10 log10(255^2 / MSE); +infinity for identical inputs.
inline double psnr(std::span<const double> x, std::span<const double> reference) {
  const double e = mse(x, reference);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(kPsnrPeak * kPsnrPeak / e);
}

inline double psnr(const Image& x, const Image& reference) {
  if (!x.same_shape(reference)) throw ShapeMismatch("psnr: image shapes differ");
  return psnr(std::span<const double>(x.pixels), std::span<const double>(reference.pixels));
}

}  // namespace redve::imaging

#endif  // REDVE_IMAGING_PSNR_HPP_
