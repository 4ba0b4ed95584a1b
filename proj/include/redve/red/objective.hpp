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

#ifndef REDVE_RED_OBJECTIVE_HPP_
#define REDVE_RED_OBJECTIVE_HPP_

#include <cmath>
#include <cstring>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>

#include "redve/denoisers/denoiser.hpp"
#include "redve/errors.hpp"
#include "redve/imaging/operator.hpp"
#include "redve/linalg.hpp"
#include "redve/red/cg.hpp"

namespace redve::red {

using denoisers::DenoiserFn;

struct CgSettings {
  double tolerance = 1e-10;
  int max_iterations = 200;
  double failure_residual = 1e-6;
};

/**
 * Denoiser-regularized least squares
 *
 *   E(x) = ||H x - y||^2 / (2 sigma^2) + alpha * x^T (x - f(x)) / 2.
 *
 * Immutable after construction apart from a one-entry cache of the last
 * denoiser evaluation (a logged cost and the next step usually share it);
 * every member is safe to call concurrently as long as the denoiser is.
 */
class RedObjective {
 public:
  RedObjective(imaging::LinearOperator forward, Vector y, double sigma, double alpha,
               DenoiserFn denoiser, CgSettings cg = {})
      : state_(std::make_shared<State>(std::move(forward), std::move(y), sigma, alpha,
                                       std::move(denoiser), cg)) {
    const State& s = *state_;
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("RedObjective: sigma must be > 0");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("RedObjective: alpha must be > 0");
    if (!s.denoiser) throw InvalidArgument("RedObjective: empty denoiser");
    if (s.y.size() != s.forward.output_size())
      throw ShapeMismatch("RedObjective: measurement size " + std::to_string(s.y.size()) +
                          " does not match operator output " +
                          std::to_string(s.forward.output_size()));
    state_->back_projection = s.forward.adjoint(s.y);
    scale(1.0 / (sigma * sigma), state_->back_projection);
    if (s.forward.circulant()) {
      const auto& t = s.forward.transfer();
      state_->fp_denominator.resize(t.size());
      for (std::size_t i = 0; i < t.size(); ++i)
        state_->fp_denominator[i] = std::norm(t[i]) / (sigma * sigma) + alpha;
    }
  }

  const imaging::LinearOperator& forward() const { return state_->forward; }
  const Vector& measurement() const { return state_->y; }
  double sigma() const { return state_->sigma; }
  double alpha() const { return state_->alpha; }
  const DenoiserFn& denoiser() const { return state_->denoiser; }
  std::size_t dimension() const { return state_->forward.input_size(); }

  /// Largest step that keeps steepest descent stable for a passive denoiser
  /// and a kernel with ||H|| <= 1.
  double default_step_size() const {
    const double s2 = sigma() * sigma();
    return s2 / (1.0 + 2.0 * alpha() * s2);
  }

  double data_fidelity(std::span<const double> x) const {
    check(x);
    const Vector r = subtract(forward().apply(x), measurement());
    return dot(r, r) / (2.0 * sigma() * sigma());
  }

  double regularizer(std::span<const double> x) const {
    check(x);
    return regularizer_given(x, denoised(x));
  }

  double cost(std::span<const double> x) const {
    return data_fidelity(x) + alpha() * regularizer(x);
  }

  /// H^T (H x - y) / sigma^2 + alpha (x - f(x)).
  Vector gradient(std::span<const double> x) const {
    check(x);
    Vector g = forward().adjoint(forward().apply(x));
    scale(1.0 / (sigma() * sigma()), g);
    axpy(-1.0, state_->back_projection, g);
    const Vector fx = denoised(x);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += alpha() * (x[i] - fx[i]);
    return g;
  }

  /// Solves (H^T H / sigma^2 + alpha I) x = H^T y / sigma^2 + alpha f(x_k).
  Vector fp_step(std::span<const double> xk) const {
    check(xk);
    Vector rhs = denoised(xk);
    scale(alpha(), rhs);
    axpy(1.0, state_->back_projection, rhs);
    return solve_normal(rhs, xk);
  }

  /// Applies (H^T H / sigma^2 + alpha I)^{-1}; `guess` seeds CG.
  Vector solve_normal(std::span<const double> rhs, std::span<const double> guess) const {
    const auto& op = forward();
    if (op.circulant()) {
      imaging::ComplexVector s = op.fft().forward(rhs);
      for (std::size_t i = 0; i < s.size(); ++i) s[i] /= state_->fp_denominator[i];
      return op.fft().inverse_real(s);
    }
    const double inv_s2 = 1.0 / (sigma() * sigma());
    const double a = alpha();
    auto normal = [&op, inv_s2, a](std::span<const double> v) {
      Vector out = op.adjoint(op.apply(v));
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] * inv_s2 + a * v[i];
      return out;
    };
    const CgSettings& cg = state_->cg;
    CgResult res = conjugate_gradient(normal, rhs, guess, cg.tolerance, cg.max_iterations);
    if (res.relative_residual > cg.failure_residual)
      throw CgNoConvergence("conjugate gradients stalled at relative residual " +
                            std::to_string(res.relative_residual));
    return std::move(res.x);
  }

  double regularizer_given(std::span<const double> x, std::span<const double> fx) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * (x[i] - fx[i]);
    return 0.5 * s;
  }

 private:
  struct State {
    State(imaging::LinearOperator f, Vector meas, double s, double a, DenoiserFn d, CgSettings c)
        : forward(std::move(f)), y(std::move(meas)), sigma(s), alpha(a), denoiser(std::move(d)), cg(c) {}
    imaging::LinearOperator forward;
    Vector y;
    double sigma;
    double alpha;
    DenoiserFn denoiser;
    CgSettings cg;
    Vector back_projection;  // H^T y / sigma^2
    Vector fp_denominator;   // |H^|^2 / sigma^2 + alpha, circulant case only
    std::mutex cache_mutex;
    Vector cached_x, cached_fx;
  };

  Vector denoised(std::span<const double> x) const {
    State& s = *state_;
    {
      std::lock_guard lock(s.cache_mutex);
      if (s.cached_x.size() == x.size() && !x.empty() &&
          std::memcmp(s.cached_x.data(), x.data(), x.size() * sizeof(double)) == 0)
        return s.cached_fx;
    }
    Vector fx = s.denoiser(x);
    std::lock_guard lock(s.cache_mutex);
    s.cached_x.assign(x.begin(), x.end());
    s.cached_fx = fx;
    return fx;
  }

  void check(std::span<const double> x) const {
    if (x.size() != dimension())
      throw ShapeMismatch("RedObjective: image has " + std::to_string(x.size()) + " pixels, expected " +
                          std::to_string(dimension()));
  }

  std::shared_ptr<State> state_;
};

}  // namespace redve::red

#endif  // REDVE_RED_OBJECTIVE_HPP_
