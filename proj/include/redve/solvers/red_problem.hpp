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

#ifndef REDVE_SOLVERS_RED_PROBLEM_HPP_
#define REDVE_SOLVERS_RED_PROBLEM_HPP_

#include <optional>
#include <span>
#include <utility>

#include "redve/red/objective.hpp"
#include "redve/solvers/problem.hpp"

namespace redve::solvers {

/// The RED fixed-point iteration with cost, gradient and default SD step.
inline FixedPointProblem make_red_problem(const red::RedObjective& obj,
                                          std::optional<Vector> reference = std::nullopt) {
  if (reference && reference->size() != obj.dimension())
    throw ShapeMismatch("make_red_problem: reference size mismatch");
  FixedPointProblem p;
  p.dimension = obj.dimension();
  p.step = [obj](std::span<const double> x) { return obj.fp_step(x); };
  p.objective = [obj](std::span<const double> x) { return obj.cost(x); };
  p.gradient = [obj](std::span<const double> x) { return obj.gradient(x); };
  p.reference = std::move(reference);
  p.default_step_size = obj.default_step_size();
  return p;
}

}  // namespace redve::solvers

#endif  // REDVE_SOLVERS_RED_PROBLEM_HPP_
