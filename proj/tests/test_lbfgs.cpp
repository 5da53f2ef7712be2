/*
 Copyright 2026 The ptsafe Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ptsafe/lbfgs.hpp"
#include "ptsafe/types.hpp"

using namespace ptsafe;

TEST_CASE("quadratic bowls are solved in a handful of iterations") {
  const int dim = 8;
  std::mt19937_64 gen(3);
  Mat a(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) a(i, j) = 2.0 * uniform01(gen) - 1.0;
  }
  const Mat h = a.transpose() * a + Mat::Identity(dim, dim);
  Vec target(dim);
  for (int i = 0; i < dim; ++i) target(i) = 2.0 * uniform01(gen) - 1.0;

  Objective quad = [&](const Vec& w, Vec& grad) {
    const Vec d = w - target;
    grad = h * d;
    return 0.5 * d.dot(h * d);
  };
  LbfgsConfig cfg;
  cfg.gradient_tolerance = 1e-10;
  cfg.c2 = 0.1;  // near-exact line search restores quadratic termination
  const LbfgsResult res = minimize_lbfgs(quad, Vec::Zero(dim), cfg);
  CHECK(res.converged);
  CHECK(res.iterations <= 2 * dim + 5);
  CHECK((res.w - target).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("the Rosenbrock valley is traversed to the global minimum") {
  Objective rosen = [](const Vec& w, Vec& grad) {
    const double x = w(0), y = w(1);
    grad.resize(2);
    grad(0) = -400.0 * x * (y - x * x) - 2.0 * (1.0 - x);
    grad(1) = 200.0 * (y - x * x);
    const double t1 = y - x * x, t2 = 1.0 - x;
    return 100.0 * t1 * t1 + t2 * t2;
  };
  Vec w0(2);
  w0 << -1.2, 1.0;
  LbfgsConfig cfg;
  cfg.max_iterations = 500;
  cfg.gradient_tolerance = 1e-10;
  const LbfgsResult res = minimize_lbfgs(rosen, w0, cfg);
  CHECK(res.converged);
  CHECK(std::abs(res.w(0) - 1.0) <= 1e-6);
  CHECK(std::abs(res.w(1) - 1.0) <= 1e-6);
  CHECK(res.value <= 1e-12);
}

TEST_CASE("the optimizer strictly improves on the starting value") {
  Objective rosen = [](const Vec& w, Vec& grad) {
    const double x = w(0), y = w(1);
    grad.resize(2);
    grad(0) = -400.0 * x * (y - x * x) - 2.0 * (1.0 - x);
    grad(1) = 200.0 * (y - x * x);
    const double t1 = y - x * x, t2 = 1.0 - x;
    return 100.0 * t1 * t1 + t2 * t2;
  };
  Vec w0(2);
  w0 << -1.2, 1.0;
  LbfgsConfig cfg;
  cfg.max_iterations = 200;
  Vec g0(2);
  const double f0 = rosen(w0, g0);
  const LbfgsResult res = minimize_lbfgs(rosen, w0, cfg);
  CHECK(res.value < f0);
  CHECK(std::isfinite(res.value));
  CHECK(std::isfinite(res.grad_norm));
}

TEST_CASE("a zero gradient at the start returns immediately") {
  Objective flat_min = [](const Vec& w, Vec& grad) {
    grad = 2.0 * w;
    return w.squaredNorm();
  };
  const LbfgsResult res = minimize_lbfgs(flat_min, Vec::Zero(3), LbfgsConfig{});
  CHECK(res.converged);
  CHECK(res.iterations == 0);
  CHECK(res.value == 0.0);
}

TEST_CASE("iteration budget zero evaluates once and stops") {
  Objective quad = [](const Vec& w, Vec& grad) {
    grad = 2.0 * w;
    return w.squaredNorm();
  };
  Vec w0(2);
  w0 << 1.0, -1.0;
  LbfgsConfig cfg;
  cfg.max_iterations = 0;
  const LbfgsResult res = minimize_lbfgs(quad, w0, cfg);
  CHECK(!res.converged);
  CHECK(res.iterations == 0);
  CHECK(res.value == 2.0);
}

TEST_CASE("a non-finite starting objective is reported as a numeric error") {
  Objective bad = [](const Vec& w, Vec& grad) {
    grad = w;
    return std::numeric_limits<double>::quiet_NaN();
  };
  CHECK_THROWS_AS(minimize_lbfgs(bad, Vec::Ones(2), LbfgsConfig{}), NumericError);
}

TEST_CASE("steep exponential objectives converge from a far-out start") {
  Objective steep = [](const Vec& w, Vec& grad) {
    const double v = std::exp(w(0)) + w(0) * w(0);
    grad.resize(1);
    grad(0) = std::exp(w(0)) + 2.0 * w(0);
    return v;
  };
  Vec w0(1);
  w0 << 10.0;
  LbfgsConfig cfg;
  cfg.max_iterations = 200;
  cfg.gradient_tolerance = 1e-8;
  const LbfgsResult res = minimize_lbfgs(steep, w0, cfg);
  CHECK(res.converged);
  // Minimum of exp(x) + x^2: exp(x) + 2x = 0 near x = -0.3517337112491958.
  CHECK(res.w(0) == doctest::Approx(-0.3517337112491958).epsilon(1e-6));
}

TEST_CASE("invalid solver settings are rejected") {
  Objective quad = [](const Vec& w, Vec& grad) {
    grad = 2.0 * w;
    return w.squaredNorm();
  };
  LbfgsConfig cfg;
  cfg.memory = 0;
  CHECK_THROWS_AS(minimize_lbfgs(quad, Vec::Ones(2), cfg), ConfigError);
  cfg = LbfgsConfig{};
  cfg.c2 = 1e-5;  // must satisfy 0 < c1 < c2 < 1
  CHECK_THROWS_AS(minimize_lbfgs(quad, Vec::Ones(2), cfg), ConfigError);
}
