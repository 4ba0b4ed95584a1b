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

#ifndef REDVE_IMAGING_NOISE_HPP_
#define REDVE_IMAGING_NOISE_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>

#include "redve/errors.hpp"
#include "redve/imaging/image.hpp"
#include "redve/imaging/operator.hpp"

namespace redve::imaging {

/// SplitMix64 finalizer; used to derive well-mixed seeds from small integers.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/**
 * Gaussian noise source: mt19937_64 (bit-exact across standard libraries)
 * seeded through SplitMix64, with Box-Muller on 53-bit uniforms. The
 * standard distributions are avoided because their algorithms are
 * implementation-defined.
 */
class NoiseGenerator {
 public:
  explicit NoiseGenerator(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(splitmix64(seed ^ splitmix64(stream))) {}

  /// Uniform in (0, 1].
  double uniform() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

  double standard_normal() {
    if (spare_) {
      const double z = *spare_;
      spare_.reset();
      return z;
    }
    const double u1 = uniform(), u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    return rad * std::cos(ang);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// y = H x + e with e ~ N(0, sigma^2) i.i.d.; bit-identical for equal inputs.
inline Image degrade(const Image& x, const LinearOperator& op, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InvalidArgument("degrade: sigma must be >= 0");
  Image y = op.apply(x);
  if (sigma == 0.0) return y;
  NoiseGenerator gen(seed);
  for (double& v : y.pixels) v += sigma * gen.standard_normal();
  return y;
}

}  // namespace redve::imaging

#endif  // REDVE_IMAGING_NOISE_HPP_
