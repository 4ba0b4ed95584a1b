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

#ifndef REDVE_VE_EXTRAPOLATE_HPP_
#define REDVE_VE_EXTRAPOLATE_HPP_

#include <optional>

#include "redve/errors.hpp"
#include "redve/linalg.hpp"
#include "redve/ve/mgs_qr.hpp"
#include "redve/ve/weights.hpp"
#include "redve/ve/window.hpp"

namespace redve::ve {

enum class ExtrapolationStatus {
  Extrapolated,     // x is the weighted combination of the window
  Converged,        // first difference vanished; x is x_m
  NoExtrapolation,  // no usable weights at any order; x is the last iterate
};

struct ExtrapolationResult {
  Vector x;
  ExtrapolationStatus status = ExtrapolationStatus::Extrapolated;
  std::optional<ExtrapolationWeights> weights;
  Method requested = Method::MPE;
  int kappa_used = 0;
  bool rre_fallback = false;
  // The last difference column was dependent on the previous ones, so the
  // weights annihilate U exactly and all three methods coincide.
  bool exact_null_space = false;
};

/**
 * One extrapolation x_(m,kappa) from a window, with the degeneracy policy:
 *
 *  - stationary window (u_0 = 0): returns x_m with status Converged;
 *  - MPE / SVD-MPE weights that do not exist (vanishing sum) or an SVD that
 *    does not converge: retried with RRE and flagged;
 *  - leading kappa columns rank deficient: kappa shrinks to the effective
 *    rank, where the next column is dependent and the null-space weights are
 *    exact for the lower-dimensional affine sequence;
 *  - null-space weights summing to zero: RRE at kappa-1;
 *  - kappa exhausted: the last plain iterate with status NoExtrapolation.
 */
inline ExtrapolationResult extrapolate_once(const VectorSequenceWindow& window, Method method,
                                            double rank_tolerance = kDefaultRankTolerance) {
  ExtrapolationResult res;
  res.requested = method;

  QrFactorization qr;
  try {
    qr = mgs_qr(build_difference_matrix(window), rank_tolerance);
  } catch (const ZeroFirstColumn&) {
    res.x.assign(window[0].begin(), window[0].end());
    res.status = ExtrapolationStatus::Converged;
    return res;
  }

  int kappa = window.kappa();
  bool force_rre = false;
  while (kappa >= 1) {
    const QrFactorization sub = kappa + 1 == qr.cols() ? qr : qr.leading(kappa + 1);
    if (sub.effective_rank < kappa) {
      kappa = sub.effective_rank;
      continue;
    }

    std::optional<ExtrapolationWeights> w;
    if (sub.effective_rank == kappa) {
      try {
        w = gamma_mpe(sub);
        res.exact_null_space = true;
      } catch (const DegenerateSum&) {
        force_rre = true;
        --kappa;
        continue;
      }
    } else if (force_rre || method == Method::RRE) {
      w = gamma_rre(sub);
      res.rre_fallback = method != Method::RRE;
    } else {
      try {
        w = compute_weights(method, sub);
      } catch (const DegenerateSum&) {
        w = gamma_rre(sub);
        res.rre_fallback = true;
      } catch (const NoConvergence&) {
        w = gamma_rre(sub);
        res.rre_fallback = true;
      }
    }

    res.x = reconstruct(window, sub, *w);
    res.kappa_used = kappa;
    res.weights = std::move(w);
    res.status = ExtrapolationStatus::Extrapolated;
    return res;
  }

  const auto last = window[static_cast<std::size_t>(window.kappa()) + 1];
  res.x.assign(last.begin(), last.end());
  res.status = ExtrapolationStatus::NoExtrapolation;
  return res;
}

}  // namespace redve::ve

#endif  // REDVE_VE_EXTRAPOLATE_HPP_
