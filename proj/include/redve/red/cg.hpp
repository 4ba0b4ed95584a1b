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

#ifndef REDVE_RED_CG_HPP_
#define REDVE_RED_CG_HPP_

#include <cmath>
#include <functional>
#include <span>

#include "redve/errors.hpp"
#include "redve/linalg.hpp"

namespace redve::red {

struct CgResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;  // ||b - A x|| / ||b||
};

/**
 * Conjugate gradients for a symmetric positive definite operator, started
 * from x0. Stops when the recursively updated residual drops below
 * tol * ||b|| or after max_iterations; the final residual is recomputed
 * from scratch so callers can trust it.
 */
inline CgResult conjugate_gradient(const std::function<Vector(std::span<const double>)>& apply,
                                   std::span<const double> b, std::span<const double> x0,
                                   double tol, int max_iterations) {
  if (b.size() != x0.size()) throw ShapeMismatch("conjugate_gradient: size mismatch");
  CgResult out{Vector(x0.begin(), x0.end()), 0, 0.0};
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    out.x.assign(b.size(), 0.0);
    return out;
  }
  Vector r = subtract(b, apply(out.x));
  Vector p = r;
  double rr = dot(r, r);
  const double stop = tol * bnorm;
  while (std::sqrt(rr) > stop && out.iterations < max_iterations) {
    const Vector ap = apply(p);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) break;  // lost positive definiteness (round-off)
    const double step = rr / pap;
    axpy(step, p, out.x);
    axpy(-step, ap, r);
    const double rr_next = dot(r, r);
    const double beta = rr_next / rr;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
    rr = rr_next;
    ++out.iterations;
  }
  out.relative_residual = norm2(subtract(b, apply(out.x))) / bnorm;
  return out;
}

}  // namespace redve::red

#endif  // REDVE_RED_CG_HPP_
