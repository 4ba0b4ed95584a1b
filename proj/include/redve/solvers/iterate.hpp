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

#ifndef REDVE_SOLVERS_ITERATE_HPP_
#define REDVE_SOLVERS_ITERATE_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "redve/errors.hpp"
#include "redve/imaging/psnr.hpp"
#include "redve/linalg.hpp"
#include "redve/solvers/problem.hpp"
#include "redve/solvers/trace.hpp"
#include "redve/ve/extrapolate.hpp"
#include "redve/ve/window.hpp"

namespace redve::solvers {

struct SolveResult {
  Vector x;
  IterationTrace trace;
  Termination reason = Termination::Continue;
  int extrapolations = 0;
  int discarded_extrapolations = 0;  // non-finite extrapolated points
  double max_stability_sum = 0.0;
  std::vector<ve::ExtrapolationWeights> weights;  // one entry per accepted cycle
  bool returned_best = false;  // safeguard replaced the final iterate

  int inner_steps() const { return trace.inner_steps(); }
};

/// ||next - prev|| / ||prev||; the absolute norm when prev is zero.
inline double relative_step(std::span<const double> prev, std::span<const double> next) {
  const double d = distance(prev, next);
  if (d == 0.0) return 0.0;
  const double n = norm2(prev);
  return n > 0.0 ? d / n : d;
}

namespace detail {

// Bookkeeping shared by all drivers: map evaluations, trace, cost logging.
class Session {
 public:
  Session(const FixedPointProblem& problem, const SolveConfig& config)
      : problem_(problem),
        config_(config),
        log_every_(resolve_log_every(config, problem.dimension)),
        start_(std::chrono::steady_clock::now()) {
    if (!problem.step) throw InvalidArgument("FixedPointProblem: missing step map");
  }

  int steps() const { return steps_; }
  IterationTrace& trace() { return trace_; }

  void check_start(std::span<const double> x0) const {
    if (x0.size() != problem_.dimension)
      throw ShapeMismatch("initial point has " + std::to_string(x0.size()) + " entries, expected " +
                          std::to_string(problem_.dimension));
    if (!all_finite(x0)) throw InvalidArgument("initial point has non-finite entries");
  }

  /// Records one baseline-map evaluation that moved x to next.
  void record(std::span<const double> x, const Vector& next) {
    ++steps_;
    if (!all_finite(next)) throw NonFiniteIterate(steps_, trace_);
    TraceRecord r;
    r.iter = steps_;
    r.step_norm = relative_step(x, next);
    if (steps_ % log_every_ == 0) annotate(r, next, true);
    r.elapsed_s = elapsed();
    trace_.push(std::move(r));
  }

  /// Overwrites the newest record's cost/PSNR with those of x (an
  /// extrapolated point) and tags it with the stability sum.
  void mark_boundary(std::span<const double> x, double gamma_abs_sum) {
    TraceRecord& r = trace_.back();
    r.cost.reset();
    r.psnr.reset();
    annotate(r, x, false);
    r.gamma_abs_sum = gamma_abs_sum;
    r.elapsed_s = elapsed();
  }

  Vector advance(std::span<const double> x, const MapFn& map) {
    Vector next = map(x);
    if (next.size() != x.size()) throw ShapeMismatch("step map changed the dimension");
    record(x, next);
    return next;
  }

  Termination status(int budget) const { return check_termination(trace_, config_.tol, budget); }

  std::optional<double> best_cost() const { return best_cost_; }
  const Vector& best_x() const { return best_x_; }

 private:
  void annotate(TraceRecord& r, std::span<const double> x, bool plain) {
    if (problem_.objective) {
      const double c = problem_.objective(x);
      r.cost = c;
      if (plain && (!best_cost_ || c < *best_cost_)) {
        best_cost_ = c;
        best_x_.assign(x.begin(), x.end());
      }
    }
    if (problem_.reference) r.psnr = imaging::psnr(x, *problem_.reference);
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  const FixedPointProblem& problem_;
  const SolveConfig& config_;
  int log_every_;
  std::chrono::steady_clock::time_point start_;
  int steps_ = 0;
  IterationTrace trace_;
  std::optional<double> best_cost_;
  Vector best_x_;
};

inline double resolve_step_size(const FixedPointProblem& p, const SolveConfig& c) {
  const double s = c.step_size > 0.0 ? c.step_size : p.default_step_size;
  if (!(s > 0.0)) throw InvalidArgument("step size must be > 0 (no default available)");
  return s;
}

inline MapFn gradient_step_map(const FixedPointProblem& p, double step) {
  if (!p.gradient) throw InvalidArgument("problem has no gradient");
  return [grad = p.gradient, step](std::span<const double> x) {
    Vector next(x.begin(), x.end());
    axpy(-step, grad(x), next);
    return next;
  };
}

// Plain iterations of `map` until converged or `budget` evaluations in total.
inline Termination iterate_plain(Session& s, Vector& x, const MapFn& map, int budget) {
  Termination t = Termination::Continue;
  while (s.steps() < budget) {
    x = s.advance(x, map);
    t = s.status(budget);
    if (t != Termination::Continue) break;
  }
  return t == Termination::Continue ? Termination::Budget : t;
}

inline SolveResult run_cycles(const FixedPointProblem& problem, std::span<const double> x0,
                              const SolveConfig& config, const MapFn& map) {
  config.validate();
  Session s(problem, config);
  s.check_start(x0);
  const int cycle = config.m + config.kappa + 1;
  const int ve_budget = config.max_inner_steps - config.stabilization_iters;
  if (ve_budget < cycle) throw InvalidArgument("budget does not admit one extrapolation cycle");

  SolveResult res;
  Vector x(x0.begin(), x0.end());
  Termination reason = Termination::Continue;

  while (reason == Termination::Continue && s.steps() + cycle <= ve_budget) {
    std::vector<Vector> seq;
    seq.reserve(cycle + 1);
    seq.push_back(x);
    for (int j = 0; j < cycle; ++j) {
      seq.push_back(s.advance(seq.back(), map));
      if (s.trace().back().step_norm <= config.tol) {
        reason = Termination::Converged;
        break;
      }
    }
    if (reason == Termination::Converged) {
      x = std::move(seq.back());
      break;
    }

    std::vector<Vector> tail(std::make_move_iterator(seq.begin() + config.m),
                             std::make_move_iterator(seq.end()));
    const ve::VectorSequenceWindow window(std::move(tail), config.kappa, config.m);
    ve::ExtrapolationResult ext = ve::extrapolate_once(window, config.ve_method);
    switch (ext.status) {
      case ve::ExtrapolationStatus::Converged:
        x.assign(window[0].begin(), window[0].end());
        reason = Termination::Converged;
        break;
      case ve::ExtrapolationStatus::NoExtrapolation:
        x.assign(window[window.kappa() + 1].begin(), window[window.kappa() + 1].end());
        break;
      case ve::ExtrapolationStatus::Extrapolated:
        if (!all_finite(ext.x)) {
          // Safeguard: keep the last plain iterate.
          ++res.discarded_extrapolations;
          x.assign(window[window.kappa() + 1].begin(), window[window.kappa() + 1].end());
          break;
        }
        x = std::move(ext.x);
        ++res.extrapolations;
        res.max_stability_sum = std::max(res.max_stability_sum, ext.weights->stability_sum);
        s.mark_boundary(x, ext.weights->stability_sum);
        res.weights.push_back(std::move(*ext.weights));
        break;
    }
    if (reason == Termination::Continue && s.steps() >= config.max_inner_steps)
      reason = Termination::Budget;
  }

  if (reason == Termination::Continue) reason = iterate_plain(s, x, map, ve_budget);
  if (reason != Termination::Converged && config.stabilization_iters > 0)
    reason = iterate_plain(s, x, map, config.max_inner_steps);

  if (problem.objective && config.stabilization_iters > 0 && s.best_cost() &&
      *s.best_cost() < problem.objective(x)) {
    x = s.best_x();
    res.returned_best = true;
  }
  res.x = std::move(x);
  res.trace = std::move(s.trace());
  res.reason = reason;
  return res;
}

}  // namespace detail

/// x_{k+1} = F(x_k) until the relative step drops to tol or the budget runs out.
inline SolveResult run_fixed_point(const FixedPointProblem& problem, std::span<const double> x0,
                                   const SolveConfig& config) {
  config.validate();
  detail::Session s(problem, config);
  s.check_start(x0);
  SolveResult res;
  res.x.assign(x0.begin(), x0.end());
  res.reason = detail::iterate_plain(s, res.x, problem.step, config.max_inner_steps);
  res.trace = std::move(s.trace());
  return res;
}

/**
 * Restarted extrapolation: each cycle runs m + kappa + 1 baseline steps,
 * extrapolates from x_m .. x_{m+kappa+1} and restarts from the result.
 * Steps that do not fill a whole cycle, then stabilization_iters more, run
 * as plain iterations. With an objective and a stabilization pass, the
 * best logged plain iterate is returned if it beats the final one.
 */
inline SolveResult run_ve_cycling(const FixedPointProblem& problem, std::span<const double> x0,
                                  const SolveConfig& config) {
  return detail::run_cycles(problem, x0, config, problem.step);
}

/// x_{k+1} = x_k - step * grad E(x_k).
inline SolveResult run_steepest_descent(const FixedPointProblem& problem, std::span<const double> x0,
                                        const SolveConfig& config) {
  const MapFn map = detail::gradient_step_map(problem, detail::resolve_step_size(problem, config));
  config.validate();
  detail::Session s(problem, config);
  s.check_start(x0);
  SolveResult res;
  res.x.assign(x0.begin(), x0.end());
  res.reason = detail::iterate_plain(s, res.x, map, config.max_inner_steps);
  res.trace = std::move(s.trace());
  return res;
}

/// Steepest descent steps as the baseline map of the extrapolation cycle.
inline SolveResult run_steepest_descent_ve(const FixedPointProblem& problem,
                                           std::span<const double> x0, const SolveConfig& config) {
  const MapFn map = detail::gradient_step_map(problem, detail::resolve_step_size(problem, config));
  return detail::run_cycles(problem, x0, config, map);
}

/**
 * Accelerated gradient with a constant step and no restarts:
 *   x_{k+1} = y_k - step * grad E(y_k)
 *   t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2
 *   y_{k+1} = x_{k+1} + (t_k - 1) / t_{k+1} * (x_{k+1} - x_k)
 * One gradient evaluation per inner step; step norms are measured on x.
 */
inline SolveResult run_nesterov(const FixedPointProblem& problem, std::span<const double> x0,
                                const SolveConfig& config) {
  const MapFn map = detail::gradient_step_map(problem, detail::resolve_step_size(problem, config));
  config.validate();
  detail::Session s(problem, config);
  s.check_start(x0);

  Vector x(x0.begin(), x0.end());
  Vector y = x;
  double t = 1.0;
  Termination reason = Termination::Continue;
  while (s.steps() < config.max_inner_steps) {
    Vector next = map(y);
    if (next.size() != x.size()) throw ShapeMismatch("gradient changed the dimension");
    s.record(x, next);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = next[i] + beta * (next[i] - x[i]);
    x = std::move(next);
    t = t_next;
    reason = s.status(config.max_inner_steps);
    if (reason != Termination::Continue) break;
  }
  SolveResult res;
  res.x = std::move(x);
  res.reason = reason == Termination::Continue ? Termination::Budget : reason;
  res.trace = std::move(s.trace());
  return res;
}

inline SolveResult solve(const FixedPointProblem& problem, std::span<const double> x0,
                         const SolveConfig& config) {
  switch (config.method) {
    case SolverKind::FixedPoint: return run_fixed_point(problem, x0, config);
    case SolverKind::FixedPointVe: return run_ve_cycling(problem, x0, config);
    case SolverKind::SteepestDescent: return run_steepest_descent(problem, x0, config);
    case SolverKind::SteepestDescentVe: return run_steepest_descent_ve(problem, x0, config);
    case SolverKind::Nesterov: return run_nesterov(problem, x0, config);
  }
  throw InvalidArgument("solve: unknown method");
}

}  // namespace redve::solvers

#endif  // REDVE_SOLVERS_ITERATE_HPP_
