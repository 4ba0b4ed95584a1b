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

#ifndef REDVE_IO_EXPERIMENT_HPP_
#define REDVE_IO_EXPERIMENT_HPP_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "redve/denoisers/denoiser.hpp"
#include "redve/errors.hpp"
#include "redve/imaging/image.hpp"
#include "redve/imaging/noise.hpp"
#include "redve/imaging/operator.hpp"
#include "redve/imaging/psf.hpp"
#include "redve/imaging/psnr.hpp"
#include "redve/io/pgm.hpp"
#include "redve/io/trace_csv.hpp"
#include "redve/red/conditions.hpp"
#include "redve/red/objective.hpp"
#include "redve/solvers/iterate.hpp"
#include "redve/solvers/problem.hpp"
#include "redve/solvers/red_problem.hpp"

namespace redve::io {

enum class Task { DeblurUniform, DeblurGaussian, SuperResolution, LinDemo, CheckDenoiser };

inline std::string to_string(Task t) {
  switch (t) {
    case Task::DeblurUniform: return "deblur-uniform";
    case Task::DeblurGaussian: return "deblur-gaussian";
    case Task::SuperResolution: return "superres";
    case Task::LinDemo: return "lindemo";
    case Task::CheckDenoiser: return "check-denoiser";
  }
  return "?";
}

inline bool needs_input(Task t) { return t != Task::LinDemo; }

struct Degradation {
  imaging::PsfKind psf_kind = imaging::PsfKind::Uniform;
  int psf_size = 9;
  double psf_std = 0.0;
  int factor = 1;
  double sigma = std::sqrt(2.0);
  std::uint64_t seed = 1;
};

/// Blur and noise of each task (the 25x25 support of the Gaussian deblur
/// kernel is a choice; it covers about eight standard deviations).
inline Degradation task_degradation(Task t) {
  Degradation d;
  switch (t) {
    case Task::DeblurGaussian:
      d.psf_kind = imaging::PsfKind::Gaussian;
      d.psf_size = 25;
      d.psf_std = 1.6;
      break;
    case Task::SuperResolution:
      d.psf_kind = imaging::PsfKind::Gaussian;
      d.psf_size = 7;
      d.psf_std = 1.6;
      d.factor = 3;
      d.sigma = 5.0;
      break;
    default:
      break;
  }
  return d;
}

// Patch-weighted strength per task: deblurring at sigma = sqrt(2) needs strong
// smoothing to stay stable, super-resolution at sigma = 5 loses edges with it.
inline double default_patch_h(Task t) { return t == Task::SuperResolution ? 12.0 : 25.0; }

inline denoisers::DenoiserSpec task_denoiser(Task t) {
  return denoisers::DenoiserSpec::patch_weighted(1, 3, default_patch_h(t));
}

struct ExperimentConfig {
  Task task = Task::DeblurUniform;
  std::string input;
  std::string output_dir = ".";
  std::string trace_path;  // empty: <output_dir>/trace_<method>.csv
  std::string method_name = "fp";
  solvers::SolveConfig solve;
  Degradation degradation;
  double alpha = 0.02;
  denoisers::DenoiserSpec denoiser = denoisers::DenoiserSpec::patch_weighted(1, 3, 25.0);

  void validate() const {
    if (needs_input(task) && input.empty()) throw UsageError("--input is required for task " + to_string(task));
    if (output_dir.empty()) throw UsageError("--output-dir must not be empty");
    if (!(alpha > 0.0)) throw UsageError("--alpha must be > 0");
    if (!(degradation.sigma > 0.0)) throw UsageError("--sigma must be > 0");
    solve.validate();
  }
};

struct ExperimentReport {
  std::string method;
  int iters = 0;
  double final_cost = 0.0;
  double final_psnr = 0.0;
  double initial_psnr = 0.0;
  double elapsed_s = 0.0;
  solvers::SolveResult result;
  std::vector<std::string> files;  // written outputs
};

inline std::string summary_line(const ExperimentReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %d %.12g %.6f %.3f", r.method.c_str(), r.iters, r.final_cost,
                r.final_psnr, r.elapsed_s);
  return buf;
}

namespace detail {

inline std::string output_path(const ExperimentConfig& c, const std::string& name) {
  return (std::filesystem::path(c.output_dir) / name).string();
}

inline void ensure_output_dir(const ExperimentConfig& c) {
  std::error_code ec;
  std::filesystem::create_directories(c.output_dir, ec);
  if (ec) throw IoFailure("cannot create output directory '" + c.output_dir + "': " + ec.message());
}

inline imaging::LinearOperator forward_operator(const Degradation& d, int width, int height) {
  const imaging::Psf psf = imaging::make_psf(d.psf_kind, d.psf_size, d.psf_std);
  if (d.factor == 1) return imaging::LinearOperator::blur(psf, width, height);
  return imaging::LinearOperator::blur_downsample(psf, d.factor, width, height);
}

// Super-resolution starts from the zero-filled back projection scaled by
// factor^2 (only one sample in factor^2 is nonzero); deblurring from y.
inline Vector initial_point(const imaging::LinearOperator& op, const Vector& y) {
  if (op.factor() == 1) return y;
  Vector x = op.adjoint(y);
  scale(static_cast<double>(op.factor()) * op.factor(), x);
  return x;
}

inline ExperimentReport run_restoration(const ExperimentConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const imaging::Image truth = read_pgm(c.input);
  const imaging::LinearOperator op = forward_operator(c.degradation, truth.width, truth.height);
  const imaging::Image y = imaging::degrade(truth, op, c.degradation.sigma, c.degradation.seed);
  const denoisers::Denoiser f(c.denoiser, truth.width, truth.height);
  const red::RedObjective obj(op, y.pixels, c.degradation.sigma, c.alpha, f.function());
  const solvers::FixedPointProblem problem = solvers::make_red_problem(obj, truth.pixels);
  const Vector x0 = initial_point(op, y.pixels);

  ExperimentReport rep;
  rep.method = c.method_name;
  rep.initial_psnr = imaging::psnr(imaging::clip(imaging::Image(truth.width, truth.height, x0)), truth);
  rep.result = solvers::solve(problem, x0, c.solve);
  const imaging::Image restored(truth.width, truth.height, rep.result.x);
  rep.iters = rep.result.inner_steps();
  rep.final_cost = obj.cost(restored.pixels);
  rep.final_psnr = imaging::psnr(imaging::clip(restored), truth);

  ensure_output_dir(c);
  const std::string degraded = output_path(c, "degraded.pgm");
  const std::string restored_path = output_path(c, "restored_" + c.method_name + ".pgm");
  const std::string trace = c.trace_path.empty() ? output_path(c, "trace_" + c.method_name + ".csv") : c.trace_path;
  write_pgm(degraded, y);
  write_pgm(restored_path, restored);
  write_trace_csv(trace, rep.result.trace);
  rep.files = {degraded, restored_path, trace};
  if (op.factor() != 1) {
    const std::string init = output_path(c, "initial.pgm");
    write_pgm(init, imaging::Image(truth.width, truth.height, x0));
    rep.files.push_back(init);
  }
  rep.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << summary_line(rep) << '\n';
  return rep;
}

inline void print_row(std::ostream& out, const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  out << buf << '\n';
}

// Linear problems where extrapolation with kappa equal to the degree of the
// minimal polynomial is exact after one cycle.
inline ExperimentReport run_lindemo(const ExperimentConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  struct Case {
    const char* name;
    solvers::LinearFixedPointProblem problem;
    int m, kappa;
  };
  const Vector diag{0.5, 0.25}, b{1.0, 3.0};
  const Vector lambda{0.9, 0.9, 0.5, 0.5, 0.2, 0.2};
  const std::vector<Case> cases{
      {"diag2", solvers::diagonal_linear_problem(diag, b), 0, 2},
      {"sym6", solvers::symmetric_linear_problem(lambda, c.degradation.seed), 2, 3},
  };

  ExperimentReport rep;
  rep.method = "lindemo";
  out << "# problem method m kappa inner_steps relative_error max_gamma_abs_sum\n";
  for (const Case& cs : cases) {
    const Vector x0(cs.problem.dimension(), 0.0);
    for (ve::Method method : {ve::Method::MPE, ve::Method::RRE, ve::Method::SVDMPE}) {
      solvers::SolveConfig sc;
      sc.method = solvers::SolverKind::FixedPointVe;
      sc.ve_method = method;
      sc.m = cs.m;
      sc.kappa = cs.kappa;
      sc.max_inner_steps = cs.m + cs.kappa + 2;
      sc.tol = 0.0;
      solvers::SolveResult r = solvers::run_ve_cycling(cs.problem.as_problem(), x0, sc);
      const double err = distance(r.x, *cs.problem.fixed_point) / norm2(*cs.problem.fixed_point);
      print_row(out, "%s %s %d %d %d %.3e %.6g", cs.name, std::string(ve::to_string(method)).c_str(), cs.m, cs.kappa,
                r.inner_steps(), err, r.max_stability_sum);
      rep.final_cost = std::max(rep.final_cost, err);
      rep.result = std::move(r);
    }
  }
  if (!c.trace_path.empty()) {
    write_trace_csv(c.trace_path, rep.result.trace);
    rep.files.push_back(c.trace_path);
  }
  rep.iters = rep.result.inner_steps();
  rep.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

inline ExperimentReport run_check_denoiser(const ExperimentConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const imaging::Image img = read_pgm(c.input);
  struct Entry {
    const char* name;
    denoisers::DenoiserSpec spec;
  };
  const std::vector<Entry> entries{
      {"identity", denoisers::DenoiserSpec::identity()},
      {"gaussian", denoisers::DenoiserSpec::gaussian(0.5, 5)},
      {"gaussian-1.6", denoisers::DenoiserSpec::gaussian(1.6, 7)},
      {"patch-weighted", c.denoiser.kind == denoisers::DenoiserKind::PatchWeighted
                             ? c.denoiser
                             : denoisers::DenoiserSpec::patch_weighted(1, 3, 25.0)},
  };
  constexpr int kIterations = 50;
  out << "# denoiser homogeneity_dev(c=1.001) passivity_frozen passivity_full\n";
  for (const Entry& e : entries) {
    const denoisers::Denoiser f(e.spec, img.width, img.height);
    const double dev = red::check_local_homogeneity(f.function(), img.pixels, 1.001);
    const auto frozen = red::check_passivity(f.frozen_at(img.pixels), img.pixels, kIterations);
    const auto full = red::check_passivity(f.function(), img.pixels, kIterations);
    print_row(out, "%s %.3e %.6f %.6f%s", e.name, dev, frozen.spectral_radius, full.spectral_radius,
              full.passive(1e-3) ? "" : "  (full Jacobian not passive)");
  }
  ExperimentReport rep;
  rep.method = "check-denoiser";
  rep.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace detail

/// Runs one configured task; errors propagate as exceptions.
inline ExperimentReport run_experiment(const ExperimentConfig& config, std::ostream& out) {
  config.validate();
  switch (config.task) {
    case Task::DeblurUniform:
    case Task::DeblurGaussian:
    case Task::SuperResolution: return detail::run_restoration(config, out);
    case Task::LinDemo: return detail::run_lindemo(config, out);
    case Task::CheckDenoiser: return detail::run_check_denoiser(config, out);
  }
  throw InvalidArgument("run_experiment: unknown task");
}

}  // namespace redve::io

#endif  // REDVE_IO_EXPERIMENT_HPP_
