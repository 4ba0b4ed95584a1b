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

#ifndef REDVE_RED_CONDITIONS_HPP_
#define REDVE_RED_CONDITIONS_HPP_

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>

#include "redve/denoisers/denoiser.hpp"
#include "redve/errors.hpp"
#include "redve/imaging/noise.hpp"
#include "redve/linalg.hpp"

namespace redve::red {

inline constexpr double kHomogeneityEpsilon = 1e-12;

/// ||f(c x) - c f(x)|| / (||f(x)|| + eps). Zero for any linear denoiser.
inline double check_local_homogeneity(const denoisers::DenoiserFn& f, std::span<const double> x,
                                      double c) {
  Vector cx(x.begin(), x.end());
  scale(c, cx);
  const Vector fx = f(x);
  Vector diff = f(cx);
  axpy(-c, fx, diff);
  return norm2(diff) / (norm2(fx) + kHomogeneityEpsilon);
}

struct PassivityEstimate {
  double spectral_radius = 0.0;
  int iterations = 0;
  double last_change = 0.0;  // |estimate_k - estimate_{k-1}|, a rough quality hint

  bool passive(double tolerance = 1e-6) const { return spectral_radius <= 1.0 + tolerance; }
};

/**
 * Power iteration on the denoiser Jacobian at x, each product taken as a
 * forward difference (f(x + h v) - f(x)) / h with h = 1e-4 ||x|| / ||v||.
 */
inline PassivityEstimate check_passivity(const denoisers::DenoiserFn& f, std::span<const double> x,
                                         int iterations, std::uint64_t seed = 0x5eed) {
  if (iterations < 1) throw InvalidArgument("check_passivity: need at least one iteration");
  if (x.empty()) throw InvalidArgument("check_passivity: empty image");
  const double xnorm = norm2(x);
  const Vector fx = f(x);

  imaging::NoiseGenerator gen(seed);
  Vector v(x.size());
  for (double& e : v) e = gen.standard_normal();
  scale(1.0 / norm2(v), v);

  PassivityEstimate out;
  Vector probe(x.size());
  for (int k = 0; k < iterations; ++k) {
    // v has unit norm here.
    const double h = xnorm > 0.0 ? 1e-4 * xnorm : 1e-4;
    for (std::size_t i = 0; i < x.size(); ++i) probe[i] = x[i] + h * v[i];
    Vector jv = f(probe);
    axpy(-1.0, fx, jv);
    scale(1.0 / h, jv);
    const double lambda = norm2(jv);
    out.last_change = std::abs(lambda - out.spectral_radius);
    out.spectral_radius = lambda;
    out.iterations = k + 1;
    if (lambda == 0.0) break;
    scale(1.0 / lambda, jv);
    v = std::move(jv);
  }
  return out;
}

}  // namespace redve::red

#endif  // REDVE_RED_CONDITIONS_HPP_
