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

#ifndef REDVE_IMAGING_PSF_HPP_
#define REDVE_IMAGING_PSF_HPP_

#include <cmath>
#include <numeric>

#include "redve/errors.hpp"
#include "redve/linalg.hpp"

namespace redve::imaging {

enum class PsfKind { Uniform, Gaussian };

class InvalidSize : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Normalized k x k point spread function with a centered anchor.
struct Psf {
  PsfKind kind = PsfKind::Uniform;
  int size = 1;
  double stddev = 0.0;  // Gaussian only
  Vector taps;          // row-major, size * size

  int radius() const { return size / 2; }
  double tap(int dr, int dc) const {
    return taps[static_cast<std::size_t>(dr + radius()) * size + (dc + radius())];
  }
};

inline Psf make_psf(PsfKind kind, int size, double stddev = 0.0) {
  if (size < 1 || size % 2 == 0) throw InvalidSize("make_psf: size must be odd and >= 1");
  Psf p{kind, size, stddev, Vector(static_cast<std::size_t>(size) * size)};
  if (kind == PsfKind::Uniform) {
    const double t = 1.0 / (static_cast<double>(size) * size);
    for (double& v : p.taps) v = t;
    return p;
  }
  if (!(stddev > 0.0)) throw InvalidArgument("make_psf: Gaussian stddev must be > 0");
  const int r = size / 2;
  for (int i = -r; i <= r; ++i)
    for (int j = -r; j <= r; ++j)
      p.taps[static_cast<std::size_t>(i + r) * size + (j + r)] =
          std::exp(-(i * i + j * j) / (2.0 * stddev * stddev));
  const double sum = std::accumulate(p.taps.begin(), p.taps.end(), 0.0);
  for (double& v : p.taps) v /= sum;
  return p;
}

}  // namespace redve::imaging

#endif  // REDVE_IMAGING_PSF_HPP_
