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

#include "ptsafe/game_model.hpp"
#include "ptsafe/problems.hpp"

using namespace ptsafe;

namespace {

AffineDynamics make_random_dynamics(int n, int m_u, int m_a, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto draw = [&gen](Eigen::Index rows, Eigen::Index cols) {
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = 2.0 * uniform01(gen) - 1.0;
    }
    return m;
  };
  const Mat A = draw(n, n);
  const Mat G = draw(n, m_u);
  const Mat K = draw(n, m_a);
  AffineDynamics dyn;
  dyn.n = n;
  dyn.m_u = m_u;
  dyn.m_a = m_a;
  dyn.drift = [A](const Vec& x) -> Vec { return A * x; };
  dyn.control_gain = [G](const Vec&) { return G; };
  dyn.adversary_gain = [K](const Vec&) { return K; };
  return dyn;
}

}  // namespace

TEST_CASE("rhs equals drift plus gain-weighted inputs") {
  const AffineDynamics dyn = make_random_dynamics(3, 2, 1, 11);
  std::mt19937_64 gen(12);
  Vec x(3), u(2), a(1);
  for (int i = 0; i < 3; ++i) x(i) = 2.0 * uniform01(gen) - 1.0;
  for (int i = 0; i < 2; ++i) u(i) = 2.0 * uniform01(gen) - 1.0;
  a(0) = 2.0 * uniform01(gen) - 1.0;

  const Vec expect = dyn.drift(x) + dyn.control_gain(x) * u + dyn.adversary_gain(x) * a;
  CHECK((rhs(dyn, x, u, a) - expect).norm() == 0.0);
}

TEST_CASE("rhs validates input dimensions eagerly") {
  const AffineDynamics dyn = make_random_dynamics(3, 2, 1, 13);
  const Vec x = Vec::Zero(3), u = Vec::Zero(2), a = Vec::Zero(1);
  CHECK_THROWS_AS(rhs(dyn, Vec::Zero(2), u, a), ConfigError);
  CHECK_THROWS_AS(rhs(dyn, x, Vec::Zero(3), a), ConfigError);
  CHECK_THROWS_AS(rhs(dyn, x, u, Vec::Zero(2)), ConfigError);
}

TEST_CASE("running cost matches hand-computed value on the bounded example") {
  const BenchmarkProblem prob = make_bounded_problem(0.5, 1.5);
  Vec x(2), u(2), a(2);
  x << 0.5, 0.0;
  u << 1.0, 0.0;
  a << 0.0, 0.0;
  // L(x) + L_u(x) u + u' R_u u with L = 0.53867513459481287,
  // L_u1 = 0.14906596041315368, u' R_u u = 1/4.
  CHECK(running_cost(prob.cost, x, u, a) ==
        doctest::Approx(0.93774109500796654).epsilon(1e-14));
}

TEST_CASE("hamiltonian is quadratic in the control and concave in the adversary") {
  const BenchmarkProblem prob = make_bounded_problem(0.5, 1.5);
  std::mt19937_64 gen(21);
  Vec x(2), u(2), a(2), lam(2);
  x << 0.4, -0.3;
  for (int i = 0; i < 2; ++i) {
    u(i) = 2.0 * uniform01(gen) - 1.0;
    a(i) = 2.0 * uniform01(gen) - 1.0;
    lam(i) = 2.0 * uniform01(gen) - 1.0;
  }
  const Vec zero = Vec::Zero(2);
  const Mat ru = prob.cost.control_weight(x);
  const Mat ra = prob.cost.adversary_weight(x);

  const double h0u = hamiltonian(prob.model, prob.cost, x, zero, a, lam);
  const double hp = hamiltonian(prob.model, prob.cost, x, u, a, lam);
  const double hm = hamiltonian(prob.model, prob.cost, x, -u, a, lam);
  CHECK(hp + hm - 2.0 * h0u == doctest::Approx(2.0 * u.dot(ru * u)).epsilon(1e-12));

  const double h0a = hamiltonian(prob.model, prob.cost, x, u, zero, lam);
  const double hpa = hamiltonian(prob.model, prob.cost, x, u, a, lam);
  const double hma = hamiltonian(prob.model, prob.cost, x, u, -a, lam);
  CHECK(hpa + hma - 2.0 * h0a == doctest::Approx(-2.0 * a.dot(ra * a)).epsilon(1e-12));
}

TEST_CASE("rate constant matches the closed form pi * 2^(1/8)") {
  const double g = gamma_constant(std::pow(2.0, 0.75), 2.0, 0.75, 1.25, 1.0);
  CHECK(g == doctest::Approx(3.425931081624035).epsilon(1e-13));
  CHECK(g == doctest::Approx(M_PI * std::pow(2.0, 0.125)).epsilon(1e-13));
}

TEST_CASE("rate constant matches an independent quadrature of the settling integral") {
  // Frozen from integrating dv / (alpha v^p + beta v^q) over (0, inf) with
  // adaptive quadrature; trustworthy to ~6e-9.
  const double g = gamma_constant(std::pow(2.0, 0.75), 2.0, 0.75, 1.25, 1.0);
  CHECK(g == doctest::Approx(3.425931081774005).epsilon(1e-7));
}

TEST_CASE("rate constant reduces to pi / alpha in the symmetric case") {
  CHECK(gamma_constant(2.0, 2.0, 0.5, 1.5, 1.0) ==
        doctest::Approx(M_PI / 2.0).epsilon(1e-12));
}

TEST_CASE("rate constant scales as c^-r when both coefficients scale by c") {
  const double base1 = gamma_constant(1.3, 0.7, 0.6, 1.4, 1.0);
  CHECK(gamma_constant(3.0 * 1.3, 3.0 * 0.7, 0.6, 1.4, 1.0) ==
        doctest::Approx(base1 / 3.0).epsilon(1e-12));
  const double base2 = gamma_constant(1.3, 0.7, 0.3, 0.8, 2.0);
  CHECK(gamma_constant(2.5 * 1.3, 2.5 * 0.7, 0.3, 0.8, 2.0) ==
        doctest::Approx(base2 / (2.5 * 2.5)).epsilon(1e-12));
}

TEST_CASE("rate constant rejects parameters violating its inequalities by name") {
  CHECK_THROWS_WITH_AS(gamma_constant(-1.0, 2.0, 0.75, 1.25, 1.0),
                       doctest::Contains("alpha > 0"), DomainError);
  CHECK_THROWS_WITH_AS(gamma_constant(1.0, 0.0, 0.75, 1.25, 1.0),
                       doctest::Contains("beta > 0"), DomainError);
  CHECK_THROWS_WITH_AS(gamma_constant(1.0, 2.0, 2.0, 2.5, 1.0),
                       doctest::Contains("p*r < 1"), DomainError);
  CHECK_THROWS_WITH_AS(gamma_constant(1.0, 2.0, 0.25, 0.75, 1.0),
                       doctest::Contains("q*r > 1"), DomainError);
  CHECK_THROWS_WITH_AS(gamma_constant(1.0, 2.0, 0.75, 0.0, 1.0),
                       doctest::Contains("p, q, r > 0"), DomainError);
}

TEST_CASE("signed power is odd and matches the frozen value") {
  CHECK(signed_power(0.5, 1.5) == doctest::Approx(0.35355339059327379).epsilon(1e-15));
  CHECK(signed_power(-0.5, 1.5) == doctest::Approx(-0.35355339059327379).epsilon(1e-15));
  CHECK(signed_power(0.0, 0.5) == 0.0);
  Vec y(3);
  y << -0.5, 0.0, 0.5;
  const Vec s = signed_power(y, 1.5);
  CHECK(s(0) == signed_power(-0.5, 1.5));
  CHECK(s(1) == 0.0);
  CHECK(s(2) == signed_power(0.5, 1.5));
}

TEST_CASE("required decrease rate vanishes at the origin and below") {
  const PredefinedTimeParams ptp = make_predefined_time_params(0.5, 1.5, 3.4259);
  CHECK(predefined_rate(ptp, 0.0) == 0.0);
  CHECK(predefined_rate(ptp, -1.0) == 0.0);
  const double expect =
      ptp.gamma / ptp.predefined_time * (ptp.alpha + ptp.beta);  // v = 1, r = 1
  CHECK(predefined_rate(ptp, 1.0) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("predefined-time parameter builder wires the documented exponents") {
  const PredefinedTimeParams ptp = make_predefined_time_params(0.5, 1.5, 3.4259);
  CHECK(ptp.p == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(ptp.q == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(ptp.r == 1.0);
  CHECK(ptp.alpha == doctest::Approx(std::pow(2.0, 0.75)).epsilon(1e-15));
  CHECK(ptp.beta == 2.0);
  CHECK(ptp.predefined_time == 3.4259);
  CHECK(ptp.gamma == doctest::Approx(3.425931081624035).epsilon(1e-13));
}
