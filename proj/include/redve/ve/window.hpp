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

#ifndef REDVE_VE_WINDOW_HPP_
#define REDVE_VE_WINDOW_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "redve/errors.hpp"
#include "redve/linalg.hpp"

namespace redve::ve {

/**
 * The iterates x_m, ..., x_{m+kappa+1} feeding a single extrapolation.
 *
 * `m` is the warm-up offset inside the current cycle and is kept for
 * bookkeeping only; the extrapolation itself sees just the kappa+2 vectors.
 */
class VectorSequenceWindow {
 public:
  VectorSequenceWindow(std::vector<Vector> vectors, int kappa, int m = 0)
      : vectors_(std::move(vectors)), kappa_(kappa), m_(m) {
    if (kappa_ < 1) throw InvalidArgument("window: kappa must be >= 1");
    if (m_ < 0) throw InvalidArgument("window: m must be >= 0");
    if (vectors_.size() != static_cast<std::size_t>(kappa_) + 2)
      throw InvalidArgument("window: expected kappa+2 = " + std::to_string(kappa_ + 2) +
                            " vectors, got " + std::to_string(vectors_.size()));
    const std::size_t n = vectors_.front().size();
    if (n == 0) throw InvalidArgument("window: vectors must be non-empty");
    for (const auto& v : vectors_) {
      if (v.size() != n) throw ShapeMismatch("window: vectors differ in length");
      if (!all_finite(v)) throw InvalidArgument("window: non-finite entry");
    }
  }

  std::size_t dimension() const { return vectors_.front().size(); }
  int kappa() const { return kappa_; }
  int m() const { return m_; }

  /// i-th vector of the window, i.e. x_{m+i}.
  std::span<const double> operator[](std::size_t i) const { return vectors_[i]; }
  const std::vector<Vector>& vectors() const { return vectors_; }

  /// Window restricted to x_m, ..., x_{m+kappa+1} for a smaller kappa.
  VectorSequenceWindow leading(int kappa) const {
    return VectorSequenceWindow(
        std::vector<Vector>(vectors_.begin(), vectors_.begin() + kappa + 2), kappa, m_);
  }

 private:
  std::vector<Vector> vectors_;
  int kappa_;
  int m_;
};

/// U = [x_{m+1}-x_m, ..., x_{m+kappa+1}-x_{m+kappa}], N x (kappa+1).
inline Matrix build_difference_matrix(const VectorSequenceWindow& window) {
  const std::size_t n = window.dimension();
  const std::size_t cols = static_cast<std::size_t>(window.kappa()) + 1;
  Matrix u(n, cols);
  for (std::size_t c = 0; c < cols; ++c) {
    auto next = window[c + 1];
    auto prev = window[c];
    auto out = u.col(c);
    for (std::size_t i = 0; i < n; ++i) out[i] = next[i] - prev[i];
  }
  return u;
}

}  // namespace redve::ve

#endif  // REDVE_VE_WINDOW_HPP_
