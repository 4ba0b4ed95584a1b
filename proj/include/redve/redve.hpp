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

#ifndef REDVE_REDVE_HPP_
#define REDVE_REDVE_HPP_

// Everything except the command-line parser (redve/io/args.hpp), which needs
// CLI11.

#include "redve/denoisers/denoiser.hpp"
#include "redve/denoisers/patch_weighted.hpp"
#include "redve/errors.hpp"
#include "redve/imaging/fft.hpp"
#include "redve/imaging/image.hpp"
#include "redve/imaging/noise.hpp"
#include "redve/imaging/operator.hpp"
#include "redve/imaging/psf.hpp"
#include "redve/imaging/psnr.hpp"
#include "redve/io/experiment.hpp"
#include "redve/io/pgm.hpp"
#include "redve/io/trace_csv.hpp"
#include "redve/linalg.hpp"
#include "redve/red/cg.hpp"
#include "redve/red/conditions.hpp"
#include "redve/red/objective.hpp"
#include "redve/solvers/iterate.hpp"
#include "redve/solvers/problem.hpp"
#include "redve/solvers/red_problem.hpp"
#include "redve/solvers/trace.hpp"
#include "redve/ve/extrapolate.hpp"
#include "redve/ve/mgs_qr.hpp"
#include "redve/ve/small_svd.hpp"
#include "redve/ve/weights.hpp"
#include "redve/ve/window.hpp"

#endif  // REDVE_REDVE_HPP_
