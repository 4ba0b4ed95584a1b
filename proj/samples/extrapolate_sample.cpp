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

// Accelerates a slowly converging linear fixed-point iteration x <- A x + b
// with each extrapolation method and compares the error to plain iteration.

#include <cstdio>
#include <string>

#include "redve/solvers/iterate.hpp"
#include "redve/solvers/problem.hpp"

int main() {
  using namespace redve;
  const Vector eigenvalues{0.99, 0.95, 0.9, 0.7, 0.5, 0.3, 0.1, 0.05};
  const solvers::LinearFixedPointProblem linear = solvers::symmetric_linear_problem(eigenvalues, /*seed=*/7);
  const solvers::FixedPointProblem problem = linear.as_problem();
  const Vector x0(linear.dimension(), 0.0);
  const Vector& solution = *linear.fixed_point;

  solvers::SolveConfig config;
  config.max_inner_steps = 60;
  config.tol = 0.0;
  const auto plain = solvers::run_fixed_point(problem, x0, config);
  std::printf("%-8s error %.3e\n", "plain", distance(plain.x, solution) / norm2(solution));

  config.kappa = 4;
  for (ve::Method method : {ve::Method::MPE, ve::Method::RRE, ve::Method::SVDMPE}) {
    config.ve_method = method;
    const auto r = solvers::run_ve_cycling(problem, x0, config);
    std::printf("%-8s error %.3e  cycles %d  max sum|gamma| %.3g\n", std::string(ve::to_string(method)).c_str(),
                distance(r.x, solution) / norm2(solution), r.extrapolations, r.max_stability_sum);
  }
  return 0;
}
