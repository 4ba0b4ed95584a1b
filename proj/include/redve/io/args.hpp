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

#ifndef REDVE_IO_ARGS_HPP_
#define REDVE_IO_ARGS_HPP_

// Needs CLI11 on the include path (link the redve::cli target).

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "redve/denoisers/denoiser.hpp"
#include "redve/errors.hpp"
#include "redve/io/experiment.hpp"
#include "redve/solvers/problem.hpp"
#include "redve/ve/weights.hpp"

namespace redve::io {

inline const std::map<std::string, Task>& task_names() {
  static const std::map<std::string, Task> m{{"deblur-uniform", Task::DeblurUniform},
                                             {"deblur-gaussian", Task::DeblurGaussian},
                                             {"superres", Task::SuperResolution},
                                             {"lindemo", Task::LinDemo},
                                             {"check-denoiser", Task::CheckDenoiser}};
  return m;
}

struct MethodChoice {
  solvers::SolverKind kind;
  ve::Method ve_method;
};

inline const std::map<std::string, MethodChoice>& method_names() {
  using solvers::SolverKind;
  static const std::map<std::string, MethodChoice> m{
      {"fp", {SolverKind::FixedPoint, ve::Method::MPE}},
      {"fp-mpe", {SolverKind::FixedPointVe, ve::Method::MPE}},
      {"fp-rre", {SolverKind::FixedPointVe, ve::Method::RRE}},
      {"fp-svdmpe", {SolverKind::FixedPointVe, ve::Method::SVDMPE}},
      {"sd", {SolverKind::SteepestDescent, ve::Method::MPE}},
      {"sd-mpe", {SolverKind::SteepestDescentVe, ve::Method::MPE}},
      {"nesterov", {SolverKind::Nesterov, ve::Method::MPE}}};
  return m;
}

/// Default (m, kappa) per task and method.
inline std::pair<int, int> default_cycle(Task task, solvers::SolverKind kind) {
  if (kind == solvers::SolverKind::SteepestDescentVe)
    return task == Task::SuperResolution ? std::pair{1, 10} : std::pair{0, 8};
  return {0, 5};
}

namespace detail {

template <typename Map>
std::vector<std::string> keys(const Map& m) {
  std::vector<std::string> out;
  for (const auto& [k, v] : m) out.push_back(k);
  return out;
}

inline void build_app(CLI::App& app, ExperimentConfig& c, std::string& task, std::string& method,
                      std::string& denoiser, double& denoiser_std, double& denoiser_h, int& m, int& kappa,
                      double& sigma, std::uint64_t& seed) {
  app.add_option("--task", task, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(keys(task_names())));
  app.add_option("--input", c.input, "Ground-truth PGM image (P5 or P2)");
  app.add_option("--output-dir", c.output_dir, "Directory for restored images and traces")->capture_default_str();
  app.add_option("--method", method, "Solver")->check(CLI::IsMember(keys(method_names())))->capture_default_str();
  app.add_option("--m", m, "Iterations skipped before each extrapolation window");
  app.add_option("--kappa", kappa, "Extrapolation order");
  app.add_option("--alpha", c.alpha, "Regularization weight")->capture_default_str();
  app.add_option("--sigma", sigma, "Noise standard deviation (default: sqrt(2) deblur, 5 superres)");
  app.add_option("--max-iters", c.solve.max_inner_steps, "Budget of baseline iterations")->capture_default_str();
  app.add_option("--tol", c.solve.tol, "Relative step-norm stopping threshold")->capture_default_str();
  app.add_option("--stabilize", c.solve.stabilization_iters, "Plain iterations after extrapolation")
      ->capture_default_str();
  app.add_option("--step-size", c.solve.step_size, "SD / Nesterov step (default sigma^2/(1+2 alpha sigma^2))");
  app.add_option("--seed", seed, "Noise seed")->capture_default_str();
  app.add_option("--trace", c.trace_path, "Trace CSV path (default <output-dir>/trace_<method>.csv)");
  app.add_option("--denoiser", denoiser, "Denoiser")
      ->check(CLI::IsMember({"identity", "gaussian", "patch"}))
      ->capture_default_str();
  app.add_option("--denoiser-std", denoiser_std, "Gaussian denoiser standard deviation")->capture_default_str();
  app.add_option("--denoiser-h", denoiser_h, "Patch-weighted intensity scale (default 25 deblur, 12 superres)");
}

}  // namespace detail

/// Parses a command line; --help output goes to `help` and sets *help_shown.
inline ExperimentConfig parse_args(const std::vector<std::string>& argv, std::ostream* help = nullptr,
                                   bool* help_shown = nullptr) {
  ExperimentConfig c;
  std::string task, method = "fp", denoiser = "patch";
  double denoiser_std = 0.5, denoiser_h = 0.0;
  int m = 0, kappa = 0;
  double sigma = 0.0;
  std::uint64_t seed = 1;

  CLI::App app{"Regularization by denoising with vector extrapolation", "redve"};
  detail::build_app(app, c, task, method, denoiser, denoiser_std, denoiser_h, m, kappa, sigma, seed);

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();  // program name
  if (help_shown) *help_shown = false;
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    if (help) *help << app.help();
    if (help_shown) *help_shown = true;
    return c;
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\n" + app.help());
  }

  c.task = task_names().at(task);
  c.method_name = method;
  const MethodChoice choice = method_names().at(method);
  c.solve.method = choice.kind;
  c.solve.ve_method = choice.ve_method;
  const auto [dm, dk] = default_cycle(c.task, choice.kind);
  c.solve.m = app.count("--m") ? m : dm;
  c.solve.kappa = app.count("--kappa") ? kappa : dk;
  c.degradation = task_degradation(c.task);
  if (app.count("--sigma")) c.degradation.sigma = sigma;
  c.degradation.seed = seed;

  if (denoiser == "identity") c.denoiser = denoisers::DenoiserSpec::identity();
  else if (denoiser == "gaussian") c.denoiser = denoisers::DenoiserSpec::gaussian(denoiser_std, 5);
  else if (app.count("--denoiser-h")) c.denoiser = denoisers::DenoiserSpec::patch_weighted(1, 3, denoiser_h);
  else c.denoiser = task_denoiser(c.task);

  auto usage = [&app](const std::string& msg) { return UsageError(msg + "\n" + app.help()); };
  if (c.solve.kappa < 1) throw usage("--kappa must be >= 1");
  if (c.solve.m < 0) throw usage("--m must be >= 0");
  if (c.solve.max_inner_steps < 1) throw usage("--max-iters must be >= 1");
  if (solvers::uses_extrapolation(c.solve.method) &&
      c.solve.max_inner_steps < c.solve.m + c.solve.kappa + 2 + c.solve.stabilization_iters)
    throw usage("--max-iters must be >= m + kappa + 2 + stabilize for extrapolating methods");
  if (c.solve.stabilization_iters < 0) throw usage("--stabilize must be >= 0");
  if (!(c.solve.tol >= 0.0)) throw usage("--tol must be >= 0");
  if (c.solve.step_size < 0.0) throw usage("--step-size must be > 0");
  if (!(c.alpha > 0.0)) throw usage("--alpha must be > 0");
  if (!(c.degradation.sigma > 0.0)) throw usage("--sigma must be > 0");
  if (!(denoiser_std > 0.0) || (app.count("--denoiser-h") && !(denoiser_h > 0.0)))
    throw usage("denoiser parameters must be > 0");
  if (needs_input(c.task) && c.input.empty()) throw usage("--input is required for task " + task);
  return c;
}

inline ExperimentConfig parse_args(int argc, const char* const* argv, std::ostream* help = nullptr,
                                   bool* help_shown = nullptr) {
  return parse_args(std::vector<std::string>(argv, argv + argc), help, help_shown);
}

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitIo = 3, kExitNumerical = 4 };

/// Full command-line entry point: parse, run, map errors to exit codes.
inline int run_main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  try {
    bool help_shown = false;
    const ExperimentConfig config = parse_args(argv, &out, &help_shown);
    if (help_shown) return kExitOk;
    run_experiment(config, out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoFailure& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace redve::io

#endif  // REDVE_IO_ARGS_HPP_
