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

#ifndef REDVE_VE_SMALL_SVD_HPP_
#define REDVE_VE_SMALL_SVD_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "redve/errors.hpp"
#include "redve/linalg.hpp"

namespace redve::ve {

struct SmallSvd {
  Matrix u;
  Vector sigma;  // descending
  Matrix v;
};

inline constexpr int kMaxJacobiSweeps = 100;

namespace detail {

// Fills zero columns of `u` so that its columns form an orthonormal basis.
inline void complete_orthonormal_basis(Matrix& u, const std::vector<bool>& filled) {
  const std::size_t n = u.rows();
  std::size_t candidate = 0;
  for (std::size_t c = 0; c < u.cols(); ++c) {
    if (filled[c]) continue;
    while (candidate < n) {
      Vector e(n, 0.0);
      e[candidate++] = 1.0;
      // Two Gram-Schmidt passes; unfilled columns are still zero and drop out.
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = 0; k < u.cols(); ++k) axpy(-dot(u.col(k), e), u.col(k), e);
      const double len = norm2(e);
      if (len > 1e-8) {
        scale(1.0 / len, e);
        std::copy(e.begin(), e.end(), u.col(c).begin());
        break;
      }
    }
  }
}

}  // namespace detail

/**
 * SVD of a small square matrix by one-sided (Hestenes) Jacobi rotations.
 *
 * Columns of a working copy are rotated pairwise until mutually orthogonal;
 * their norms are the singular values and the accumulated rotations are V.
 * Throws NoConvergence after kMaxJacobiSweeps sweeps.
 */
inline SmallSvd small_svd(const Matrix& a) {
  const std::size_t n = a.cols();
  if (a.rows() != n) throw InvalidArgument("small_svd: matrix must be square");
  if (n == 0 || n > 64) throw InvalidArgument("small_svd: size must be in [1, 64]");

  Matrix w = a;
  Matrix v = Matrix::identity(n);
  constexpr double eps = 1e-15;

  bool converged = n == 1;
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = dot(w.col(p), w.col(p));
        const double beta = dot(w.col(q), w.col(q));
        const double gamma = dot(w.col(p), w.col(q));
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Matrix* m : {&w, &v}) {
          auto cp = m->col(p);
          auto cq = m->col(q);
          for (std::size_t i = 0; i < m->rows(); ++i) {
            const double xp = cp[i];
            const double xq = cq[i];
            cp[i] = c * xp - s * xq;
            cq[i] = s * xp + c * xq;
          }
        }
      }
    }
    converged = !rotated;
  }
  if (!converged) throw NoConvergence("small_svd: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Vector norms(n);
  for (std::size_t c = 0; c < n; ++c) norms[c] = norm2(w.col(c));
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

  SmallSvd out{Matrix(n, n), Vector(n), Matrix(n, n)};
  std::vector<bool> filled(n, false);
  const double sigma_max = norms[order[0]];
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t c = order[k];
    out.sigma[k] = norms[c];
    std::copy(v.col(c).begin(), v.col(c).end(), out.v.col(k).begin());
    if (norms[c] > 1e-300 && norms[c] > 1e-14 * sigma_max) {
      auto uk = out.u.col(k);
      std::copy(w.col(c).begin(), w.col(c).end(), uk.begin());
      scale(1.0 / norms[c], uk);
      filled[k] = true;
    }
  }
  detail::complete_orthonormal_basis(out.u, filled);
  return out;
}

}  // namespace redve::ve

#endif  // REDVE_VE_SMALL_SVD_HPP_
