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

#ifndef REDVE_VE_WEIGHTS_HPP_
#define REDVE_VE_WEIGHTS_HPP_

#include <cmath>
#include <cstddef>
#include <string_view>

#include "redve/errors.hpp"
#include "redve/linalg.hpp"
#include "redve/ve/mgs_qr.hpp"
#include "redve/ve/small_svd.hpp"
#include "redve/ve/window.hpp"

namespace redve::ve {

enum class Method { MPE, RRE, SVDMPE };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::MPE: return "MPE";
    case Method::RRE: return "RRE";
    case Method::SVDMPE: return "SVD-MPE";
  }
  return "?";
}

/// Extrapolation weights gamma (sum one) and the raw coefficients they were
/// normalized from: c for MPE, d for RRE, the last right singular vector for
/// SVD-MPE.
struct ExtrapolationWeights {
  Method method = Method::MPE;
  Vector c;
  Vector gamma;
  double stability_sum = 1.0;

  int kappa() const { return static_cast<int>(gamma.size()) - 1; }
};

/// xi and eta of the reconstruction x_m + Q_{k-1} R_{k-1} xi.
struct ReconstructionCoefficients {
  Vector xi;
  Vector eta;
};

inline constexpr double kDegenerateSumTolerance = 1e-12;

namespace detail {

inline ExtrapolationWeights normalize(Method method, Vector raw, double sum) {
  ExtrapolationWeights w;
  w.method = method;
  w.gamma.resize(raw.size());
  w.stability_sum = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    w.gamma[i] = raw[i] / sum;
    w.stability_sum += std::abs(w.gamma[i]);
  }
  w.c = std::move(raw);
  if (!all_finite(w.gamma)) throw NumericalError("extrapolation weights are not finite");
  return w;
}

}  // namespace detail

/**
 * MPE: least-squares c with c_kappa = 1, via R_{k-1} c' = -r_{k+1}.
 *
 * Only the leading kappa columns need to be independent, so this also covers
 * the exact case where the last difference is a combination of the others.
 */
inline ExtrapolationWeights gamma_mpe(const QrFactorization& qr) {
  const int kappa = qr.cols() - 1;
  if (kappa < 1) throw InvalidArgument("gamma_mpe: need at least two difference columns");
  if (qr.effective_rank < kappa) throw RankDeficient(qr.effective_rank, kappa);

  const auto k = static_cast<std::size_t>(kappa);
  Vector rhs(k);
  for (std::size_t i = 0; i < k; ++i) rhs[i] = -qr.r(i, k);
  Vector c = solve_upper(qr.r, rhs, k);
  c.push_back(1.0);

  double sum = 0.0, l1 = 0.0;
  for (double ci : c) {
    sum += ci;
    l1 += std::abs(ci);
  }
  if (std::abs(sum) < kDegenerateSumTolerance * l1)
    throw DegenerateSum("MPE coefficients sum to zero");
  return detail::normalize(Method::MPE, std::move(c), sum);
}

/// RRE: R^T R d = 1 by one forward and one backward substitution, gamma = d / sum(d).
inline ExtrapolationWeights gamma_rre(const QrFactorization& qr) {
  if (!qr.full_rank()) throw RankDeficient(qr.effective_rank, qr.cols());
  const auto n = static_cast<std::size_t>(qr.cols());
  const Vector ones(n, 1.0);
  const Vector w = solve_upper_transposed(qr.r, ones, n);
  Vector d = solve_upper(qr.r, w, n);
  double sum = 0.0;
  for (double di : d) sum += di;
  return detail::normalize(Method::RRE, std::move(d), sum);
}

/// SVD-MPE: gamma proportional to the right singular vector of R for its
/// smallest singular value.
inline ExtrapolationWeights gamma_svdmpe(const QrFactorization& qr) {
  if (!qr.full_rank()) throw RankDeficient(qr.effective_rank, qr.cols());
  const SmallSvd svd = small_svd(qr.r);
  const std::size_t last = svd.v.cols() - 1;
  Vector v(svd.v.col(last).begin(), svd.v.col(last).end());
  double sum = 0.0;
  for (double vi : v) sum += vi;
  if (std::abs(sum) < kDegenerateSumTolerance)
    throw DegenerateSum("SVD-MPE singular vector sums to zero");
  return detail::normalize(Method::SVDMPE, std::move(v), sum);
}

inline ExtrapolationWeights compute_weights(Method method, const QrFactorization& qr) {
  switch (method) {
    case Method::MPE: return gamma_mpe(qr);
    case Method::RRE: return gamma_rre(qr);
    case Method::SVDMPE: return gamma_svdmpe(qr);
  }
  throw InvalidArgument("unknown extrapolation method");
}

inline ReconstructionCoefficients reconstruction_coefficients(const QrFactorization& qr,
                                                              const ExtrapolationWeights& w) {
  const int kappa = w.kappa();
  if (kappa < 1 || qr.cols() < kappa)
    throw ShapeMismatch("reconstruct: weights do not match the factorization");
  const auto k = static_cast<std::size_t>(kappa);
  ReconstructionCoefficients rc{Vector(k), Vector(k, 0.0)};
  rc.xi[0] = 1.0 - w.gamma[0];
  for (std::size_t j = 1; j < k; ++j) rc.xi[j] = rc.xi[j - 1] - w.gamma[j];
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) rc.eta[i] += qr.r(i, j) * rc.xi[j];
  return rc;
}

/// x_m + Q_{k-1} eta, which equals sum_i gamma_i x_{m+i}.
inline Vector reconstruct(const VectorSequenceWindow& window, const QrFactorization& qr,
                          const ExtrapolationWeights& w) {
  const ReconstructionCoefficients rc = reconstruction_coefficients(qr, w);
  if (qr.effective_rank < w.kappa()) throw RankDeficient(qr.effective_rank, w.kappa());
  Vector x(window[0].begin(), window[0].end());
  for (std::size_t j = 0; j < rc.eta.size(); ++j) axpy(rc.eta[j], qr.q.col(j), x);
  return x;
}

}  // namespace redve::ve

#endif  // REDVE_VE_WEIGHTS_HPP_
