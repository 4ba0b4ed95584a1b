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
#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "redve/denoisers/denoiser.hpp"
#include "redve/imaging/image.hpp"
#include "redve/imaging/noise.hpp"
#include "redve/imaging/operator.hpp"
#include "redve/imaging/psf.hpp"
#include "redve/red/conditions.hpp"
#include "redve/red/objective.hpp"
#include "test_support.hpp"

namespace redve::red {
namespace {

using denoisers::Denoiser;
using denoisers::DenoiserSpec;
using imaging::LinearOperator;
using imaging::make_psf;
using imaging::PsfKind;
using testing::random_vector;

const double kSqrt2 = std::sqrt(2.0);

LinearOperator identity_op(int w, int h) { return LinearOperator::blur(make_psf(PsfKind::Uniform, 1), w, h); }

DenoiserFn make(const DenoiserSpec& spec, int w, int h) { return Denoiser(spec, w, h).function(); }

// Column j is H e_j.
Eigen::MatrixXd dense(const LinearOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.input_size());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(op.output_size()), n);
  Vector e(op.input_size(), 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    m.col(j) = testing::to_eigen(op.apply(e));
    e[j] = 0.0;
  }
  return m;
}

struct Quadratic {
  RedObjective obj;
  Eigen::MatrixXd h, w;
  Eigen::VectorXd x_star;
  double e_star;
};

// Linear Gaussian denoiser: E is quadratic with a closed-form minimizer.
Quadratic quadratic_oracle(int size, int blur, double alpha, std::uint64_t seed) {
  const imaging::Image truth = imaging::synthetic_scene(size, size);
  const auto op = LinearOperator::blur(make_psf(PsfKind::Uniform, blur), size, size);
  const imaging::Image y = imaging::degrade(truth, op, kSqrt2, seed);
  const DenoiserSpec spec = DenoiserSpec::gaussian(1.0, 5);
  RedObjective obj(op, y.pixels, kSqrt2, alpha, make(spec, size, size));
  const Eigen::MatrixXd h = dense(op);
  const Eigen::MatrixXd w = testing::to_eigen(denoisers::materialize_dense(spec, size, size));
  const auto n = h.cols();
  const Eigen::MatrixXd a = h.transpose() * h / 2.0 + alpha * (Eigen::MatrixXd::Identity(n, n) - w);
  const Eigen::VectorXd b = h.transpose() * testing::to_eigen(y.pixels) / 2.0;
  const Eigen::VectorXd x = a.ldlt().solve(b);
  const Eigen::VectorXd yv = testing::to_eigen(y.pixels);
  const double e_star = 0.5 * yv.squaredNorm() / 2.0 - 0.5 * b.dot(x);
  return {obj, h, w, x, e_star};
}

TEST(DataFidelity, ZeroAtMeasurementForIdentityOperator) {
  std::mt19937_64 rng(1);
  const Vector y = random_vector(rng, 36, 0, 255);
  RedObjective obj(identity_op(6, 6), y, 2.0, 0.1, make(DenoiserSpec::identity(), 6, 6));
  EXPECT_EQ(obj.forward().apply(y), y);
  EXPECT_EQ(obj.data_fidelity(y), 0.0);
}

TEST(DataFidelity, DirectFormula) {
  RedObjective obj(identity_op(2, 2), Vector(4, 0.0), 1.0, 0.1, make(DenoiserSpec::identity(), 2, 2));
  EXPECT_DOUBLE_EQ(obj.data_fidelity(Vector{2.0, 0.0, -2.0, 0.0}), 4.0);
}

TEST(DataFidelity, MatchesDenseMatrixWithUniformBlur) {
  std::mt19937_64 rng(2);
  const auto op = LinearOperator::blur(make_psf(PsfKind::Uniform, 9), 32, 32);
  const Vector x = random_vector(rng, 1024, 0, 255), y = random_vector(rng, 1024, 0, 255);
  RedObjective obj(op, y, kSqrt2, 0.02, make(DenoiserSpec::identity(), 32, 32));
  const double ref = (dense(op) * testing::to_eigen(x) - testing::to_eigen(y)).squaredNorm() / 4.0;
  EXPECT_NEAR(obj.data_fidelity(x), ref, 1e-10 * ref);
}

TEST(Regularizer, IdentityDenoiserGivesZero) {
  std::mt19937_64 rng(3);
  const Vector x = random_vector(rng, 16, -50, 50);
  RedObjective obj(identity_op(4, 4), Vector(16, 0.0), 1.0, 1.0, make(DenoiserSpec::identity(), 4, 4));
  EXPECT_EQ(obj.regularizer(x), 0.0);
}

TEST(Regularizer, HalfIdentityDenoiser) {
  const DenoiserFn half = [](std::span<const double> x) {
    Vector out(x.begin(), x.end());
    scale(0.5, out);
    return out;
  };
  RedObjective obj(identity_op(2, 2), Vector(4, 0.0), 1.0, 1.0, half);
  EXPECT_DOUBLE_EQ(obj.regularizer(Vector{1.0, 1.0, -1.0, 1.0}), 1.0);
}

TEST(Regularizer, GaussianMatchesDenseQuadraticForm) {
  std::mt19937_64 rng(4);
  const DenoiserSpec spec = DenoiserSpec::gaussian(1.3, 5);
  const Vector x = random_vector(rng, 256, 0, 255);
  RedObjective obj(identity_op(16, 16), Vector(256, 0.0), 1.0, 1.0, make(spec, 16, 16));
  const Eigen::MatrixXd w = testing::to_eigen(denoisers::materialize_dense(spec, 16, 16));
  const Eigen::VectorXd xv = testing::to_eigen(x);
  const double ref = 0.5 * (xv.squaredNorm() - xv.dot(w * xv));
  EXPECT_NEAR(obj.regularizer(x), ref, 1e-10 * ref);
}

TEST(Cost, IdentityDenoiserEqualsDataFidelity) {
  std::mt19937_64 rng(5);
  const Vector x = random_vector(rng, 64, 0, 255), y = random_vector(rng, 64, 0, 255);
  for (double alpha : {1e-9, 0.02, 7.0}) {
    RedObjective obj(identity_op(8, 8), y, 3.0, alpha, make(DenoiserSpec::identity(), 8, 8));
    EXPECT_EQ(obj.cost(x), obj.data_fidelity(x));
  }
}

TEST(Cost, SmallAlphaLimit) {
  std::mt19937_64 rng(6);
  const Vector x = random_vector(rng, 64, 0, 255), y = random_vector(rng, 64, 0, 255);
  RedObjective obj(identity_op(8, 8), y, 3.0, 1e-12, make(DenoiserSpec::gaussian(1, 3), 8, 8));
  EXPECT_NEAR(obj.cost(x), obj.data_fidelity(x), 1e-9 * obj.data_fidelity(x));
}

TEST(Cost, QuadraticOracleMinimum) {
  const Quadratic q = quadratic_oracle(12, 5, 0.02, 7);
  const Vector xs = testing::from_eigen(q.x_star);
  EXPECT_NEAR(q.obj.cost(xs), q.e_star, 1e-10 * std::abs(q.e_star));
  std::mt19937_64 rng(7);
  for (int t = 0; t < 5; ++t) {
    Vector p = xs;
    axpy(1.0, random_vector(rng, xs.size(), -1, 1), p);
    EXPECT_GT(q.obj.cost(p), q.obj.cost(xs));
  }
}

TEST(Gradient, VanishesAtQuadraticMinimizer) {
  const Quadratic q = quadratic_oracle(12, 5, 0.02, 8);
  const Vector xs = testing::from_eigen(q.x_star);
  EXPECT_LE(norm2(q.obj.gradient(xs)), 1e-8 * (1.0 + norm2(xs)));
}

TEST(Gradient, IdentityCase) {
  std::mt19937_64 rng(9);
  const Vector x = random_vector(rng, 25, 0, 255), y = random_vector(rng, 25, 0, 255);
  RedObjective obj(identity_op(5, 5), y, 1.0, 0.3, make(DenoiserSpec::identity(), 5, 5));
  const Vector g = obj.gradient(x);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(g[i], x[i] - y[i], 1e-12);
}

Vector central_differences(const RedObjective& obj, const Vector& x) {
  Vector g(x.size());
  Vector p = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-3 * (1.0 + std::abs(x[i]));
    p[i] = x[i] + h;
    const double up = obj.cost(p);
    p[i] = x[i] - h;
    const double down = obj.cost(p);
    p[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

TEST(Gradient, MatchesFiniteDifferencesForLinearDenoisers) {
  std::mt19937_64 rng(10);
  const auto op = LinearOperator::blur(make_psf(PsfKind::Uniform, 9), 16, 16);
  for (const DenoiserSpec& spec : {DenoiserSpec::identity(), DenoiserSpec::gaussian(1.0, 5)}) {
    for (int t = 0; t < 3; ++t) {
      const Vector x = random_vector(rng, 256, 0, 255), truth = random_vector(rng, 256, 0, 255);
      const Vector y = imaging::degrade(imaging::Image(16, 16, truth), op, kSqrt2, 11 + t).pixels;
      RedObjective obj(op, y, kSqrt2, 0.02, make(spec, 16, 16));
      const Vector g = obj.gradient(x), fd = central_differences(obj, x);
      EXPECT_LE(distance(g, fd) / norm2(fd), 1e-5);
    }
  }
}

TEST(FpStep, IdentityScalarRecursion) {
  std::mt19937_64 rng(12);
  const Vector y = random_vector(rng, 16, 0, 255), x = random_vector(rng, 16, 0, 255);
  const double sigma = 2.0, alpha = 0.5;
  RedObjective obj(identity_op(4, 4), y, sigma, alpha, make(DenoiserSpec::identity(), 4, 4));
  const Vector next = obj.fp_step(x);
  const double s2 = sigma * sigma;
  for (std::size_t i = 0; i < 16; ++i)
    EXPECT_NEAR(next[i], (y[i] / s2 + alpha * x[i]) / (1.0 / s2 + alpha), 1e-10);
  Vector it = x;
  for (int k = 0; k < 200; ++k) it = obj.fp_step(it);
  for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(it[i], y[i], 1e-9);
}

TEST(FpStep, LargeAlphaReducesToDenoiser) {
  std::mt19937_64 rng(13);
  const auto op = LinearOperator::blur(make_psf(PsfKind::Gaussian, 5, 1.0), 16, 16);
  const Vector y = random_vector(rng, 256, 0, 255), x = random_vector(rng, 256, 0, 255);
  const DenoiserFn f = make(DenoiserSpec::patch_weighted(1, 2, 30), 16, 16);
  RedObjective obj(op, y, 1.0, 1e8, f);
  const Vector next = obj.fp_step(x), fx = f(x);
  for (std::size_t i = 0; i < 256; ++i) EXPECT_NEAR(next[i], fx[i], 1e-6);
}

TEST(FpStep, DftSolveMatchesDenseSolve) {
  std::mt19937_64 rng(14);
  const auto op = LinearOperator::blur(make_psf(PsfKind::Gaussian, 7, 1.6), 16, 16);
  const Vector y = random_vector(rng, 256, 0, 255), x = random_vector(rng, 256, 0, 255);
  const DenoiserFn f = make(DenoiserSpec::gaussian(1.0, 5), 16, 16);
  const double alpha = 0.02;
  RedObjective obj(op, y, kSqrt2, alpha, f);
  const Eigen::MatrixXd h = dense(op);
  const Eigen::MatrixXd a = h.transpose() * h / 2.0 + alpha * Eigen::MatrixXd::Identity(256, 256);
  const Eigen::VectorXd rhs = h.transpose() * testing::to_eigen(y) / 2.0 + alpha * testing::to_eigen(f(x));
  const Vector ref = testing::from_eigen(a.ldlt().solve(rhs));
  EXPECT_LE(testing::relative_error(obj.fp_step(x), ref), 1e-9);
}

TEST(FpStep, ConjugateGradientsMatchDenseSolveWithDownsampling) {
  std::mt19937_64 rng(15);
  const auto op = LinearOperator::blur_downsample(make_psf(PsfKind::Gaussian, 7, 1.6), 3, 18, 15);
  const Vector y = random_vector(rng, op.output_size(), 0, 255), x = random_vector(rng, 270, 0, 255);
  const DenoiserFn f = make(DenoiserSpec::gaussian(1.0, 5), 18, 15);
  const double alpha = 0.02;
  RedObjective obj(op, y, 5.0, alpha, f);
  const Eigen::MatrixXd h = dense(op);
  const Eigen::MatrixXd a = h.transpose() * h / 25.0 + alpha * Eigen::MatrixXd::Identity(270, 270);
  const Eigen::VectorXd rhs = h.transpose() * testing::to_eigen(y) / 25.0 + alpha * testing::to_eigen(f(x));
  const Vector ref = testing::from_eigen(a.ldlt().solve(rhs));
  // CG stops at relative residual 1e-6; the system is well conditioned.
  EXPECT_LE(testing::relative_error(obj.fp_step(x), ref), 1e-5);
}

TEST(FpStep, ConjugateGradientFailureIsReported) {
  std::mt19937_64 rng(16);
  const auto op = LinearOperator::blur_downsample(make_psf(PsfKind::Uniform, 5), 2, 16, 16);
  const Vector y = random_vector(rng, op.output_size(), 0, 255), x = random_vector(rng, 256, 0, 255);
  RedObjective obj(op, y, 1.0, 1e-4, make(DenoiserSpec::identity(), 16, 16), CgSettings{1e-6, 1, 1e-4});
  EXPECT_THROW(obj.fp_step(x), CgNoConvergence);
}

TEST(FpStep, FixedPointSatisfiesFirstOrderCondition) {
  const Quadratic q = quadratic_oracle(12, 5, 0.02, 17);
  Vector x(q.obj.dimension(), 128.0);
  for (int k = 0; k < 3000; ++k) x = q.obj.fp_step(x);
  EXPECT_LE(norm2(q.obj.gradient(x)), 1e-6 * (1.0 + norm2(x)));
  EXPECT_LE(testing::relative_error(x, testing::from_eigen(q.x_star)), 1e-6);
}

TEST(FpStep, IterationMatrixIsContraction) {
  const Quadratic q = quadratic_oracle(8, 3, 0.02, 18);
  const auto n = q.h.cols();
  const Eigen::MatrixXd a = q.h.transpose() * q.h / 2.0 + 0.02 * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd t = a.inverse() * 0.02 * q.w;
  const double rho = t.eigenvalues().cwiseAbs().maxCoeff();
  EXPECT_LT(rho, 1.0);
}

TEST(Objective, RejectsBadParameters) {
  const auto op = identity_op(4, 4);
  const DenoiserFn f = make(DenoiserSpec::identity(), 4, 4);
  EXPECT_THROW(RedObjective(op, Vector(16, 0.0), 0.0, 1.0, f), InvalidArgument);
  EXPECT_THROW(RedObjective(op, Vector(16, 0.0), 1.0, -1.0, f), InvalidArgument);
  EXPECT_THROW(RedObjective(op, Vector(15, 0.0), 1.0, 1.0, f), ShapeMismatch);
  RedObjective ok(op, Vector(16, 0.0), 1.0, 1.0, f);
  EXPECT_THROW(ok.cost(Vector(9, 0.0)), ShapeMismatch);
}

TEST(Homogeneity, ExactForLinearDenoisers) {
  std::mt19937_64 rng(19);
  const Vector x = random_vector(rng, 256, 0, 255);
  EXPECT_EQ(check_local_homogeneity(make(DenoiserSpec::identity(), 16, 16), x, 1.001), 0.0);
  for (double c : {0.999, 1.0005, 1.001})
    EXPECT_LE(check_local_homogeneity(make(DenoiserSpec::gaussian(1.6, 7), 16, 16), x, c), 1e-12);
}

TEST(Homogeneity, ApproximateForPatchWeighted) {
  const imaging::Image img = imaging::synthetic_scene(64, 64);
  const double dev = check_local_homogeneity(make(DenoiserSpec::patch_weighted(1, 3, 25), 64, 64),
                                             img.pixels, 1.001);
  RecordProperty("deviation", std::to_string(dev));
  EXPECT_GT(dev, 0.0);
  EXPECT_LE(dev, 1e-3);
}

TEST(Passivity, IdentityHasUnitRadius) {
  std::mt19937_64 rng(20);
  const Vector x = random_vector(rng, 64, 0, 255);
  const PassivityEstimate est = check_passivity(make(DenoiserSpec::identity(), 8, 8), x, 10);
  EXPECT_NEAR(est.spectral_radius, 1.0, 1e-6);
}

TEST(Passivity, GaussianAgreesWithDenseEigenvalues) {
  std::mt19937_64 rng(21);
  const DenoiserSpec spec = DenoiserSpec::gaussian(1.0, 5);
  const Vector x = random_vector(rng, 64, 0, 255);
  const PassivityEstimate est = check_passivity(make(spec, 8, 8), x, 200);
  const Eigen::MatrixXd w = testing::to_eigen(denoisers::materialize_dense(spec, 8, 8));
  const double rho = w.eigenvalues().cwiseAbs().maxCoeff();
  EXPECT_LE(rho, 1.0 + 1e-12);
  EXPECT_LE(est.spectral_radius, 1.0 + 1e-6);
  EXPECT_NEAR(est.spectral_radius, rho, 1e-3);
  EXPECT_TRUE(est.passive());
}

TEST(Passivity, ScaledSmootherIsFlagged) {
  std::mt19937_64 rng(22);
  const Denoiser smooth(DenoiserSpec::gaussian(1.0, 5), 8, 8);
  const DenoiserFn f = [smooth](std::span<const double> x) {
    Vector out = smooth(x);
    scale(1.5, out);
    return out;
  };
  const PassivityEstimate est = check_passivity(f, random_vector(rng, 64, 0, 255), 100);
  EXPECT_GT(est.spectral_radius, 1.0);
  EXPECT_NEAR(est.spectral_radius, 1.5, 1e-3);
  EXPECT_FALSE(est.passive());
}

TEST(Passivity, PatchWeightedFrozenWeightsArePassive) {
  const imaging::Image img = imaging::synthetic_scene(32, 32);
  const Denoiser f(DenoiserSpec::patch_weighted(1, 3, 25), 32, 32);
  const PassivityEstimate frozen = check_passivity(f.frozen_at(img.pixels), img.pixels, 100);
  EXPECT_LE(frozen.spectral_radius, 1.0 + 1e-3);
  EXPECT_GE(frozen.spectral_radius, 0.99);
  // Differentiating through the weights as well is not passive; logged only.
  const PassivityEstimate full = check_passivity(f.function(), img.pixels, 100);
  RecordProperty("full_jacobian_estimate", std::to_string(full.spectral_radius));
  EXPECT_TRUE(std::isfinite(full.spectral_radius));
}

}  // namespace
}  // namespace redve::red
