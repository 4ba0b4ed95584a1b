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

// Restores a synthetic scene degraded by a 9x9 uniform blur, once with the
// plain fixed-point iteration and once with MPE cycling, and prints the cost
// of both after the same number of denoiser evaluations.

#include <cstdio>
#include <string>

#include "redve/denoisers/denoiser.hpp"
#include "redve/imaging/image.hpp"
#include "redve/imaging/noise.hpp"
#include "redve/imaging/operator.hpp"
#include "redve/imaging/psf.hpp"
#include "redve/imaging/psnr.hpp"
#include "redve/red/objective.hpp"
#include "redve/solvers/iterate.hpp"
#include "redve/solvers/red_problem.hpp"

int main() {
  using namespace redve;
  constexpr int kSize = 64;
  const imaging::Image truth = imaging::synthetic_scene(kSize, kSize);
  const auto blur = imaging::LinearOperator::blur(imaging::make_psf(imaging::PsfKind::Uniform, 9), kSize, kSize);
  const double sigma = 1.4142135623730951;
  const imaging::Image y = imaging::degrade(truth, blur, sigma, /*seed=*/1);

  const denoisers::Denoiser denoiser(denoisers::DenoiserSpec::patch_weighted(1, 3, 25.0), kSize, kSize);
  const red::RedObjective objective(blur, y.pixels, sigma, /*alpha=*/0.02, denoiser.function());
  const solvers::FixedPointProblem problem = solvers::make_red_problem(objective, truth.pixels);

  std::printf("degraded  psnr %.2f dB\n", imaging::psnr(y, truth));
  for (auto method : {solvers::SolverKind::FixedPoint, solvers::SolverKind::FixedPointVe}) {
    solvers::SolveConfig config;
    config.method = method;
    config.kappa = 5;
    config.max_inner_steps = 40;
    const solvers::SolveResult r = solvers::solve(problem, y.pixels, config);
    const imaging::Image restored = imaging::clip(imaging::Image(kSize, kSize, r.x));
    std::printf("%-9s cost %.6f  psnr %.2f dB  steps %d  extrapolations %d\n",
                solvers::to_string(method).c_str(), objective.cost(r.x), imaging::psnr(restored, truth),
                r.inner_steps(), r.extrapolations);
  }
  return 0;
}
