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

#ifndef REDVE_VE_MGS_QR_HPP_
#define REDVE_VE_MGS_QR_HPP_

#include <cstddef>

#include "redve/errors.hpp"
#include "redve/linalg.hpp"

namespace redve::ve {

inline constexpr double kDefaultRankTolerance = 1e-12;
inline constexpr double kZeroColumnFloor = 1e-300;

/**
 * Thin QR factorization U = Q R of a difference matrix.
 *
 * `effective_rank` counts the leading columns whose pivots passed the
 * relative rank test. When it is smaller than cols(), column
 * `effective_rank` is the first dependent one: its entries above the diagonal
 * of R hold the projections onto the previous q's, its pivot holds the tiny
 * residual norm, and its Q column is zero. Later columns are not factorized
 * and are zero in both Q and R.
 */
struct QrFactorization {
  Matrix q;
  Matrix r;
  int effective_rank = 0;
  double rank_tolerance = kDefaultRankTolerance;

  int cols() const { return static_cast<int>(r.cols()); }
  bool full_rank() const { return effective_rank == cols(); }

  /// Factorization of the first `k` columns (the MGS recurrence is
  /// column-sequential, so this equals factorizing U(:, 0:k) directly).
  QrFactorization leading(int k) const {
    QrFactorization out;
    out.q = Matrix(q.rows(), static_cast<std::size_t>(k));
    out.r = Matrix(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
      auto src = q.col(static_cast<std::size_t>(c));
      auto dst = out.q.col(static_cast<std::size_t>(c));
      std::copy(src.begin(), src.end(), dst.begin());
      for (int rr = 0; rr <= c; ++rr) out.r(rr, c) = r(rr, c);
    }
    out.effective_rank = effective_rank < k ? effective_rank : k;
    out.rank_tolerance = rank_tolerance;
    return out;
  }
};

/**
 * Modified Gram-Schmidt on the columns of U.
 *
 * U is taken by value and its storage becomes Q, so a caller that moves the
 * difference matrix in keeps only kappa+2 vectors alive.
 *
 * Throws ZeroFirstColumn when ||u_1|| < 1e-300. A later pivot r_ii below
 * rank_tolerance * r_11 stops the factorization (see QrFactorization).
 */
inline QrFactorization mgs_qr(Matrix u, double rank_tolerance = kDefaultRankTolerance) {
  if (!(rank_tolerance > 0.0)) throw InvalidArgument("mgs_qr: rank_tolerance must be > 0");
  const std::size_t cols = u.cols();
  if (cols == 0) throw InvalidArgument("mgs_qr: empty matrix");

  QrFactorization f;
  f.rank_tolerance = rank_tolerance;
  f.r = Matrix(cols, cols);

  const double r11 = norm2(u.col(0));
  if (!(r11 >= kZeroColumnFloor)) throw ZeroFirstColumn();
  f.r(0, 0) = r11;
  scale(1.0 / r11, u.col(0));
  f.effective_rank = 1;

  for (std::size_t i = 1; i < cols; ++i) {
    auto ui = u.col(i);
    for (std::size_t j = 0; j < i; ++j) {
      const double rji = dot(u.col(j), ui);
      f.r(j, i) = rji;
      axpy(-rji, u.col(j), ui);
    }
    const double rii = norm2(ui);
    f.r(i, i) = rii;
    if (rii < rank_tolerance * r11) {
      for (std::size_t c = i; c < cols; ++c) {
        auto qc = u.col(c);
        std::fill(qc.begin(), qc.end(), 0.0);
      }
      break;
    }
    scale(1.0 / rii, ui);
    f.effective_rank = static_cast<int>(i) + 1;
  }
  f.q = std::move(u);
  return f;
}

}  // namespace redve::ve

#endif  // REDVE_VE_MGS_QR_HPP_
