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

#ifndef REDVE_SOLVERS_PROBLEM_HPP_
#define REDVE_SOLVERS_PROBLEM_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "redve/errors.hpp"
#include "redve/imaging/noise.hpp"
#include "redve/linalg.hpp"
#include "redve/ve/mgs_qr.hpp"
#include "redve/ve/weights.hpp"

namespace redve::solvers {

using MapFn = std::function<Vector(std::span<const double>)>;
using ScalarFn = std::function<double(std::span<const double>)>;

/// x -> F(x) plus whatever is known about the problem behind it.
struct FixedPointProblem {
  std::size_t dimension = 0;
  MapFn step;                       // F
  ScalarFn objective;               // optional E(x)
  MapFn gradient;                   // optional grad E(x), needed by SD / Nesterov
  std::optional<Vector> reference;  // optional ground truth for PSNR logging
  double default_step_size = 0.0;   // used by SD / Nesterov when the config leaves it at 0
};

enum class SolverKind { FixedPoint, FixedPointVe, SteepestDescent, SteepestDescentVe, Nesterov };

inline bool uses_extrapolation(SolverKind k) {
  return k == SolverKind::FixedPointVe || k == SolverKind::SteepestDescentVe;
}

inline std::string to_string(SolverKind k) {
  switch (k) {
    case SolverKind::FixedPoint: return "fp";
    case SolverKind::FixedPointVe: return "fp-ve";
    case SolverKind::SteepestDescent: return "sd";
    case SolverKind::SteepestDescentVe: return "sd-ve";
    case SolverKind::Nesterov: return "nesterov";
  }
  return "?";
}

struct SolveConfig {
  SolverKind method = SolverKind::FixedPoint;
  ve::Method ve_method = ve::Method::MPE;
  int m = 0;
  int kappa = 5;
  int max_inner_steps = 200;  // baseline-map evaluations
  double tol = 1e-8;          // relative step norm
  int stabilization_iters = 0;
  double step_size = 0.0;  // SD / Nesterov; 0 picks the problem default
  int log_every = 0;       // cost/PSNR cadence; 0 picks by image size

  void validate() const {
    if (kappa < 1) throw InvalidArgument("kappa must be >= 1");
    if (m < 0) throw InvalidArgument("m must be >= 0");
    if (max_inner_steps < 1) throw InvalidArgument("max_inner_steps must be >= 1");
    if (stabilization_iters < 0) throw InvalidArgument("stabilization_iters must be >= 0");
    if (!(tol >= 0.0)) throw InvalidArgument("tol must be >= 0");
    if (step_size < 0.0 || !std::isfinite(step_size)) throw InvalidArgument("step_size must be > 0");
    if (log_every < 0) throw InvalidArgument("log_every must be >= 0");
    if (uses_extrapolation(method) && max_inner_steps < m + kappa + 2)
      throw InvalidArgument("max_inner_steps must be >= m + kappa + 2 for extrapolation");
  }
};

/// Cost is expensive (one denoiser call); large images log every 5th step.
inline int resolve_log_every(const SolveConfig& c, std::size_t dimension) {
  if (c.log_every > 0) return c.log_every;
  return dimension <= 128u * 128u ? 1 : 5;
}

/// x_{k+1} = A x_k + b.
struct LinearFixedPointProblem {
  Matrix a;
  Vector b;
  Vector eigenvalues;  // sorted by decreasing magnitude, when known
  std::optional<Vector> fixed_point;

  std::size_t dimension() const { return b.size(); }

  Vector step(std::span<const double> x) const {
    Vector out = a.multiply(x);
    axpy(1.0, b, out);
    return out;
  }

  FixedPointProblem as_problem() const {
    FixedPointProblem p;
    p.dimension = dimension();
    p.step = [self = *this](std::span<const double> x) { return self.step(x); };
    return p;
  }
};

/**
 * A = Q diag(lambda) Q^T with a random orthogonal Q, and a random b. The fixed
 * point Q diag(1 / (1 - lambda)) Q^T b is exact up to rounding. Requires
 * every |lambda| < 1.
 */
inline LinearFixedPointProblem symmetric_linear_problem(std::span<const double> eigenvalues,
                                                        std::uint64_t seed) {
  const std::size_t n = eigenvalues.size();
  if (n == 0) throw InvalidArgument("symmetric_linear_problem: no eigenvalues");
  for (double l : eigenvalues)
    if (!(std::abs(l) < 1.0)) throw InvalidArgument("symmetric_linear_problem: need |lambda| < 1");

  imaging::NoiseGenerator gen(seed);
  Matrix g(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) g(r, c) = gen.standard_normal();
  const ve::QrFactorization qr = ve::mgs_qr(g);
  if (!qr.full_rank()) throw NumericalError("symmetric_linear_problem: singular random basis");
  const Matrix& q = qr.q;

  LinearFixedPointProblem p;
  p.a = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) p.a(r, c) += q(r, k) * eigenvalues[k] * q(c, k);
  p.b.resize(n);
  for (double& v : p.b) v = gen.standard_normal();

  Vector coeff = q.transpose().multiply(p.b);
  for (std::size_t k = 0; k < n; ++k) coeff[k] /= 1.0 - eigenvalues[k];
  p.fixed_point = q.multiply(coeff);

  p.eigenvalues.assign(eigenvalues.begin(), eigenvalues.end());
  std::stable_sort(p.eigenvalues.begin(), p.eigenvalues.end(),
                   [](double x, double y) { return std::abs(x) > std::abs(y); });
  return p;
}

inline LinearFixedPointProblem diagonal_linear_problem(std::span<const double> diagonal,
                                                       std::span<const double> b) {
  if (diagonal.size() != b.size() || b.empty())
    throw ShapeMismatch("diagonal_linear_problem: size mismatch");
  LinearFixedPointProblem p;
  const std::size_t n = b.size();
  p.a = Matrix(n, n);
  p.b.assign(b.begin(), b.end());
  Vector xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.a(i, i) = diagonal[i];
    xs[i] = b[i] / (1.0 - diagonal[i]);
  }
  p.fixed_point = xs;
  p.eigenvalues.assign(diagonal.begin(), diagonal.end());
  std::stable_sort(p.eigenvalues.begin(), p.eigenvalues.end(),
                   [](double x, double y) { return std::abs(x) > std::abs(y); });
  return p;
}

}  // namespace redve::solvers

#endif  // REDVE_SOLVERS_PROBLEM_HPP_
