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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "redve/denoisers/denoiser.hpp"
#include "redve/imaging/image.hpp"
#include "redve/imaging/noise.hpp"
#include "redve/imaging/operator.hpp"
#include "redve/red/objective.hpp"
#include "redve/solvers/iterate.hpp"
#include "redve/solvers/problem.hpp"
#include "redve/solvers/red_problem.hpp"
#include "test_support.hpp"

namespace redve::solvers {
namespace {

using denoisers::Denoiser;
using denoisers::DenoiserSpec;
using imaging::LinearOperator;
using imaging::make_psf;
using imaging::PsfKind;

SolveConfig fixed_budget(SolverKind method, int budget) {
  SolveConfig c;
  c.method = method;
  c.max_inner_steps = budget;
  c.tol = 0.0;
  return c;
}

LinearFixedPointProblem small_diagonal() {
  const Vector d{0.5, 0.25}, b{1.0, 3.0};
  return diagonal_linear_problem(d, b);
}

// E(x) = 1/2 (x - c)^T D (x - c) with diagonal D.
FixedPointProblem diagonal_quadratic(Vector d, Vector center) {
  FixedPointProblem p;
  p.dimension = d.size();
  p.objective = [d, center](std::span<const double> x) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += 0.5 * d[i] * (x[i] - center[i]) * (x[i] - center[i]);
    return s;
  };
  p.gradient = [d, center](std::span<const double> x) {
    Vector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = d[i] * (x[i] - center[i]);
    return g;
  };
  p.step = [](std::span<const double> x) { return Vector(x.begin(), x.end()); };
  return p;
}

struct RedOracle {
  red::RedObjective obj;
  FixedPointProblem problem;
  Vector x_star;
  double e_star;
  Vector x0;
};

// Quadratic RED problem: uniform blur, mild linear Gaussian denoiser.
RedOracle red_oracle(int size) {
  const double sigma = std::sqrt(2.0), alpha = 0.02;
  const imaging::Image truth = imaging::synthetic_scene(size, size);
  const auto op = LinearOperator::blur(make_psf(PsfKind::Uniform, 9), size, size);
  const imaging::Image y = imaging::degrade(truth, op, sigma, 2024);
  const DenoiserSpec spec = DenoiserSpec::gaussian(0.5, 5);
  red::RedObjective obj(op, y.pixels, sigma, alpha, Denoiser(spec, size, size).function());

  const auto n = static_cast<Eigen::Index>(size * size);
  Eigen::MatrixXd h(n, n);
  Vector e(n, 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    h.col(j) = testing::to_eigen(op.apply(e));
    e[j] = 0.0;
  }
  const Eigen::MatrixXd w = testing::to_eigen(denoisers::materialize_dense(spec, size, size));
  const Eigen::MatrixXd a = h.transpose() * h / (sigma * sigma) + alpha * (Eigen::MatrixXd::Identity(n, n) - w);
  const Eigen::VectorXd b = h.transpose() * testing::to_eigen(y.pixels) / (sigma * sigma);
  const Vector xs = testing::from_eigen(a.ldlt().solve(b));
  return {obj, make_red_problem(obj, truth.pixels), xs, obj.cost(xs), y.pixels};
}

int first_reaching(const IterationTrace& trace, double threshold) {
  for (const TraceRecord& r : trace)
    if (r.cost && *r.cost <= threshold) return r.iter;
  return -1;
}

TEST(CheckTermination, Decisions) {
  IterationTrace t;
  t.push({1, {}, {}, 0.0, {}, 0.0});
  EXPECT_EQ(check_termination(t, 1e-6, 100), Termination::Converged);
  IterationTrace u;
  for (int i = 1; i <= 10; ++i) u.push({i, {}, {}, 1e-3, {}, 0.0});
  EXPECT_EQ(check_termination(u, 1e-6, 10), Termination::Budget);
  EXPECT_EQ(check_termination(u, 1e-6, 11), Termination::Continue);
  EXPECT_THROW(check_termination(IterationTrace{}, 1e-6, 10), InvalidArgument);
}

TEST(Trace, IndicesMustIncrease) {
  IterationTrace t;
  t.push({3, {}, {}, 0.1, {}, 0.0});
  EXPECT_THROW(t.push({3, {}, {}, 0.1, {}, 0.0}), InvalidArgument);
}

TEST(SolveConfig, Validation) {
  SolveConfig c;
  c.kappa = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.kappa = 5;
  c.method = SolverKind::FixedPointVe;
  c.max_inner_steps = 6;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.max_inner_steps = 7;
  EXPECT_NO_THROW(c.validate());
}

TEST(FixedPoint, DiagonalLinearProblem) {
  const LinearFixedPointProblem lp = small_diagonal();
  const SolveResult r = run_fixed_point(lp.as_problem(), Vector{0.0, 0.0}, fixed_budget(SolverKind::FixedPoint, 60));
  // Stops early once an iterate repeats exactly (step norm 0).
  EXPECT_LE(r.inner_steps(), 60);
  EXPECT_NEAR(r.x[0], 2.0, 1e-7);
  EXPECT_NEAR(r.x[1], 4.0, 1e-7);
}

TEST(FixedPoint, IdentityMapConvergesAfterOneStep) {
  FixedPointProblem p;
  p.dimension = 3;
  p.step = [](std::span<const double> x) { return Vector(x.begin(), x.end()); };
  const Vector x0{1.0, -2.0, 3.5};
  const SolveResult r = run_fixed_point(p, x0, SolveConfig{});
  EXPECT_EQ(r.x, x0);
  EXPECT_EQ(r.inner_steps(), 1);
  EXPECT_EQ(r.reason, Termination::Converged);
  EXPECT_EQ(r.trace.back().step_norm, 0.0);
}

TEST(FixedPoint, RedWithIdentityDenoiserConvergesToMeasurement) {
  std::mt19937_64 rng(1);
  const Vector y = testing::random_vector(rng, 64, 0, 255);
  const auto op = LinearOperator::blur(make_psf(PsfKind::Uniform, 1), 8, 8);
  red::RedObjective obj(op, y, 1.0, 0.5, Denoiser(DenoiserSpec::identity(), 8, 8).function());
  SolveConfig c;
  c.max_inner_steps = 500;
  c.tol = 1e-14;
  const SolveResult r = run_fixed_point(make_red_problem(obj), Vector(64, 0.0), c);
  EXPECT_LE(testing::relative_error(r.x, y), 1e-12);
}

TEST(FixedPoint, NonFiniteIterateCarriesTrace) {
  FixedPointProblem p;
  p.dimension = 1;
  p.step = [](std::span<const double> x) { return Vector{x[0] < 4 ? x[0] + 1 : std::nan("")}; };
  try {
    run_fixed_point(p, Vector{0.0}, fixed_budget(SolverKind::FixedPoint, 100));
    FAIL() << "expected NonFiniteIterate";
  } catch (const NonFiniteIterate& e) {
    EXPECT_EQ(e.iter, 5);
    EXPECT_EQ(e.trace.size(), 4u);
  }
}

TEST(FixedPoint, RejectsBadStart) {
  const LinearFixedPointProblem lp = small_diagonal();
  EXPECT_THROW(run_fixed_point(lp.as_problem(), Vector{0.0}, SolveConfig{}), ShapeMismatch);
  EXPECT_THROW(run_fixed_point(lp.as_problem(), Vector{0.0, std::nan("")}, SolveConfig{}), InvalidArgument);
}

TEST(VeCycling, OneCycleIsExactOnDiagonalProblem) {
  const LinearFixedPointProblem lp = small_diagonal();
  for (ve::Method method : {ve::Method::MPE, ve::Method::RRE, ve::Method::SVDMPE}) {
    SolveConfig c = fixed_budget(SolverKind::FixedPointVe, 4);
    c.kappa = 2;
    c.ve_method = method;
    c.tol = 1e-14;
    const SolveResult r = run_ve_cycling(lp.as_problem(), Vector{0.0, 0.0}, c);
    ASSERT_EQ(r.extrapolations, 1) << ve::to_string(method);
    EXPECT_NEAR(r.x[0], 2.0, 1e-8);
    EXPECT_NEAR(r.x[1], 4.0, 1e-8);
    ASSERT_TRUE(r.trace[2].gamma_abs_sum.has_value());
    EXPECT_FALSE(r.trace[1].gamma_abs_sum.has_value());
  }
}

TEST(VeCycling, StationaryStartConvergesWithoutExtrapolating) {
  const LinearFixedPointProblem lp = small_diagonal();
  SolveConfig c;
  c.method = SolverKind::FixedPointVe;
  const SolveResult r = run_ve_cycling(lp.as_problem(), *lp.fixed_point, c);
  EXPECT_EQ(r.reason, Termination::Converged);
  EXPECT_EQ(r.extrapolations, 0);
  EXPECT_EQ(r.inner_steps(), 1);
  EXPECT_EQ(r.x, *lp.fixed_point);
}

TEST(VeCycling, LinearExactnessForEveryMethod) {
  const Vector lambda{0.9, 0.9, 0.5, 0.5, 0.2, 0.2};
  const LinearFixedPointProblem lp = symmetric_linear_problem(lambda, 11);
  for (ve::Method method : {ve::Method::MPE, ve::Method::RRE, ve::Method::SVDMPE}) {
    SolveConfig c = fixed_budget(SolverKind::FixedPointVe, 7);
    c.m = 2;
    c.kappa = 3;
    c.ve_method = method;
    const SolveResult r = run_ve_cycling(lp.as_problem(), Vector(6, 0.0), c);
    ASSERT_GE(r.extrapolations, 1);
    EXPECT_LE(testing::relative_error(r.x, *lp.fixed_point), 1e-8) << ve::to_string(method);
    for (const auto& w : r.weights) {
      double s = 0;
      for (double g : w.gamma) s += g;
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
}

TEST(VeCycling, BudgetCountsOnlyMapEvaluations) {
  const Vector lambda{0.99, 0.95, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4};
  const LinearFixedPointProblem lp = symmetric_linear_problem(lambda, 12);
  int calls = 0;
  FixedPointProblem p = lp.as_problem();
  p.step = [&calls, lp](std::span<const double> x) {
    ++calls;
    return lp.step(x);
  };
  SolveConfig c = fixed_budget(SolverKind::FixedPointVe, 23);
  c.kappa = 2;
  c.stabilization_iters = 3;
  const SolveResult r = run_ve_cycling(p, Vector(8, 0.0), c);
  EXPECT_EQ(calls, 23);
  EXPECT_EQ(r.inner_steps(), 23);
  EXPECT_EQ(r.trace.size(), 23u);
  // 20 steps for cycles of 3: six cycles, two leftover steps, three stabilization steps.
  EXPECT_EQ(r.extrapolations, 6);
}

TEST(VeCycling, AsymptoticRateMatchesSecondEigenvalue) {
  const Vector lambda{0.9, 0.5, 0.1};
  const LinearFixedPointProblem lp = symmetric_linear_problem(lambda, 13);
  const Vector x0(3, 0.0);
  std::vector<double> ms, ve_err, fp_err;
  for (int m = 5; m <= 20; ++m) {
    SolveConfig c = fixed_budget(SolverKind::FixedPointVe, m + 3);
    c.m = m;
    c.kappa = 1;
    const SolveResult r = run_ve_cycling(lp.as_problem(), x0, c);
    ASSERT_EQ(r.extrapolations, 1);
    ms.push_back(m);
    ve_err.push_back(std::log(distance(r.x, *lp.fixed_point)));
    const SolveResult f = run_fixed_point(lp.as_problem(), x0, fixed_budget(SolverKind::FixedPoint, m));
    fp_err.push_back(std::log(distance(f.x, *lp.fixed_point)));
  }
  auto slope = [&ms](const std::vector<double>& v) {
    const double n = static_cast<double>(ms.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      sx += ms[i], sy += v[i], sxx += ms[i] * ms[i], sxy += ms[i] * v[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  EXPECT_NEAR(slope(ve_err) / std::log(0.5), 1.0, 0.1);
  EXPECT_NEAR(slope(fp_err) / std::log(0.9), 1.0, 0.1);
}

TEST(VeCycling, StabilitySumStaysBounded) {
  const Vector lambda{0.95, -0.8, 0.7, 0.6, -0.5, 0.3, 0.2, 0.1, 0.05, 0.01};
  const LinearFixedPointProblem lp = symmetric_linear_problem(lambda, 14);
  for (ve::Method method : {ve::Method::MPE, ve::Method::RRE, ve::Method::SVDMPE}) {
    SolveConfig c = fixed_budget(SolverKind::FixedPointVe, 400);
    c.kappa = 3;
    c.tol = 1e-13;
    c.ve_method = method;
    const SolveResult r = run_ve_cycling(lp.as_problem(), Vector(10, 0.0), c);
    EXPECT_GT(r.extrapolations, 0);
    EXPECT_LT(r.max_stability_sum, 1e3);
    EXPECT_LE(testing::relative_error(r.x, *lp.fixed_point), 1e-8);
  }
}

TEST(VeCycling, RedQuadraticOracleHalvesTheSteps) {
  const RedOracle o = red_oracle(16);
  const double threshold = o.e_star + 1e-4;
  const SolveResult fp = run_fixed_point(o.problem, o.x0, fixed_budget(SolverKind::FixedPoint, 400));
  const int k_fp = first_reaching(fp.trace, threshold);
  ASSERT_GT(k_fp, 0);
  SolveConfig c = fixed_budget(SolverKind::FixedPointVe, k_fp);
  c.kappa = 5;
  const SolveResult ve = run_ve_cycling(o.problem, o.x0, c);
  const int k_ve = first_reaching(ve.trace, threshold);
  RecordProperty("k_fp", k_fp);
  RecordProperty("k_ve", k_ve);
  ASSERT_GT(k_ve, 0);
  EXPECT_LE(2 * k_ve, k_fp);
}

TEST(VeCycling, SafeguardNeverReturnsWorseThanBestPlainIterate) {
  const RedOracle o = red_oracle(16);
  for (ve::Method method : {ve::Method::MPE, ve::Method::RRE, ve::Method::SVDMPE}) {
    SolveConfig c = fixed_budget(SolverKind::FixedPointVe, 40);
    c.kappa = 5;
    c.ve_method = method;
    c.stabilization_iters = 5;
    const SolveResult r = run_ve_cycling(o.problem, o.x0, c);
    double best_plain = std::numeric_limits<double>::infinity();
    for (const TraceRecord& rec : r.trace)
      if (rec.cost && !rec.gamma_abs_sum) best_plain = std::min(best_plain, *rec.cost);
    EXPECT_LE(o.obj.cost(r.x), best_plain);
  }
}

TEST(VeCycling, NonFiniteExtrapolationIsDiscarded) {
  // Differences (1, 1e-320) and (1e308, 0): the weights overflow the
  // combination, so the cycle must fall back to the last plain iterate.
  FixedPointProblem p;
  p.dimension = 2;
  int k = 0;
  p.step = [&k](std::span<const double> x) {
    ++k;
    if (k % 2 == 1) return Vector{x[0] + 1e308, x[1]};
    return Vector{x[0] - 1e308, x[1] + 1.0};
  };
  SolveConfig c = fixed_budget(SolverKind::FixedPointVe, 4);
  c.kappa = 1;
  const SolveResult r = run_ve_cycling(p, Vector{0.0, 0.0}, c);
  EXPECT_TRUE(all_finite(r.x));
  EXPECT_EQ(r.extrapolations + r.discarded_extrapolations, 2);
}

TEST(SteepestDescent, OneDimensionalQuadraticInOneStep) {
  const FixedPointProblem p = diagonal_quadratic({1.0}, {3.0});
  SolveConfig c;
  c.method = SolverKind::SteepestDescent;
  c.step_size = 1.0;
  const SolveResult r = run_steepest_descent(p, Vector{0.0}, c);
  EXPECT_EQ(r.x[0], 3.0);
  EXPECT_EQ(r.reason, Termination::Converged);
  EXPECT_EQ(r.inner_steps(), 2);  // the second step confirms stationarity
}

TEST(SteepestDescent, TooLargeStepDiverges) {
  const double lipschitz = 4.0;
  const FixedPointProblem p = diagonal_quadratic({lipschitz, 1.0}, {1.0, 2.0});
  SolveConfig c = fixed_budget(SolverKind::SteepestDescent, 100000);
  c.step_size = 2.5 / lipschitz;
  try {
    run_steepest_descent(p, Vector{0.0, 0.0}, c);
    FAIL() << "expected divergence";
  } catch (const NonFiniteIterate& e) {
    EXPECT_LT(e.iter, 100000);
  }
}

TEST(SteepestDescent, RequiresStepAndGradient) {
  FixedPointProblem p = diagonal_quadratic({1.0}, {0.0});
  SolveConfig c;
  EXPECT_THROW(run_steepest_descent(p, Vector{1.0}, c), InvalidArgument);
  p.gradient = nullptr;
  c.step_size = 0.5;
  EXPECT_THROW(run_steepest_descent(p, Vector{1.0}, c), InvalidArgument);
}

TEST(Nesterov, FasterThanSteepestDescentOnIllConditionedQuadratic) {
  const FixedPointProblem p = diagonal_quadratic({1.0, 0.01}, {1.0, -2.0});
  const Vector target{1.0, -2.0};
  auto steps_to = [&](SolverKind kind) {
    SolveConfig c = fixed_budget(kind, 20000);
    c.step_size = 1.0;
    c.tol = 1e-14;
    const SolveResult r = solve(p, Vector{0.0, 0.0}, c);
    // Replay to find the first iterate within 1e-6.
    Vector x{0.0, 0.0}, y = x;
    double t = 1.0;
    for (int k = 1; k <= r.inner_steps(); ++k) {
      const Vector g = p.gradient(kind == SolverKind::Nesterov ? y : x);
      Vector next = kind == SolverKind::Nesterov ? y : x;
      axpy(-1.0, g, next);
      const double tn = 0.5 * (1 + std::sqrt(1 + 4 * t * t));
      for (std::size_t i = 0; i < 2; ++i) y[i] = next[i] + (t - 1) / tn * (next[i] - x[i]);
      t = tn;
      x = next;
      if (distance(x, target) <= 1e-6) return k;
    }
    return -1;
  };
  const int sd = steps_to(SolverKind::SteepestDescent);
  const int nag = steps_to(SolverKind::Nesterov);
  ASSERT_GT(sd, 0);
  ASSERT_GT(nag, 0);
  EXPECT_LT(nag, sd);
}

TEST(Nesterov, ZeroGradientReturnsStart) {
  const FixedPointProblem p = diagonal_quadratic({2.0, 3.0}, {1.0, 1.0});
  SolveConfig c;
  c.step_size = 0.1;
  const SolveResult r = run_nesterov(p, Vector{1.0, 1.0}, c);
  EXPECT_EQ(r.x, (Vector{1.0, 1.0}));
  EXPECT_EQ(r.reason, Termination::Converged);
}

TEST(Baselines, OrderingOnRedQuadraticOracle) {
  const RedOracle o = red_oracle(16);
  auto final_cost = [&](SolverKind kind) {
    SolveConfig c = fixed_budget(kind, 60);
    return o.obj.cost(solve(o.problem, o.x0, c).x);
  };
  const double sd = final_cost(SolverKind::SteepestDescent);
  const double nag = final_cost(SolverKind::Nesterov);
  const double fp = final_cost(SolverKind::FixedPoint);
  EXPECT_GT(sd, fp);
  EXPECT_LE(nag, sd);
}

TEST(Baselines, SteepestDescentWithExtrapolationRuns) {
  const RedOracle o = red_oracle(16);
  SolveConfig c = fixed_budget(SolverKind::SteepestDescentVe, 60);
  c.kappa = 8;
  const SolveResult ve = solve(o.problem, o.x0, c);
  const SolveResult sd = solve(o.problem, o.x0, fixed_budget(SolverKind::SteepestDescent, 60));
  EXPECT_GT(ve.extrapolations, 0);
  EXPECT_LT(o.obj.cost(ve.x), o.obj.cost(sd.x));
}

TEST(Trace, LogsCostAndPsnrForSmallImages) {
  const RedOracle o = red_oracle(16);
  const SolveResult r = solve(o.problem, o.x0, fixed_budget(SolverKind::FixedPoint, 5));
  for (const TraceRecord& rec : r.trace) {
    EXPECT_TRUE(rec.cost.has_value());
    EXPECT_TRUE(rec.psnr.has_value());
    EXPECT_FALSE(rec.gamma_abs_sum.has_value());
  }
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_LE(*r.trace[i].cost, *r.trace[i - 1].cost);
    EXPECT_GE(r.trace[i].elapsed_s, r.trace[i - 1].elapsed_s);
  }
  SolveConfig sparse = fixed_budget(SolverKind::FixedPoint, 10);
  sparse.log_every = 5;
  const SolveResult s = solve(o.problem, o.x0, sparse);
  EXPECT_FALSE(s.trace[3].cost.has_value());
  EXPECT_TRUE(s.trace[4].cost.has_value());
}

}  // namespace
}  // namespace redve::solvers
