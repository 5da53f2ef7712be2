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

#ifndef PTSAFE_GAME_MODEL_HPP
#define PTSAFE_GAME_MODEL_HPP

#include <cstdint>
#include <functional>

#include "ptsafe/types.hpp"

namespace ptsafe {

/// Affine two-player dynamics  x' = f(x) + G(x) u + K(x) a.
struct AffineDynamics {
  int n = 0;    ///< state dimension
  int m_u = 0;  ///< control dimension
  int m_a = 0;  ///< adversary dimension
  std::function<Vec(const Vec&)> drift;           ///< f(x)
  std::function<Mat(const Vec&)> control_gain;    ///< G(x), n x m_u
  std::function<Mat(const Vec&)> adversary_gain;  ///< K(x), n x m_a
  Vec system_params;                              ///< concatenated parameters, may be empty
};

/// Nonquadratic running cost
///   r(x,u,a) = L(x) + L_u(x) u + L_a(x) a + u' R_u(x) u - a' R_a(x) a.
struct RunningCost {
  std::function<double(const Vec&)> state_cost;      ///< L(x)
  std::function<RowVec(const Vec&)> control_cross;   ///< L_u(x), 1 x m_u
  std::function<RowVec(const Vec&)> adversary_cross; ///< L_a(x), 1 x m_a
  std::function<Mat(const Vec&)> control_weight;     ///< R_u(x), SPD
  std::function<Mat(const Vec&)> adversary_weight;   ///< R_a(x), SPD
};

/// Open safe set S = { x : level(x) > 0 } with a box for sampling.
struct SafeSet {
  enum class Kind { bounded, unbounded };
  Kind kind = Kind::bounded;
  std::function<double(const Vec&)> level;  ///< s(x)
  Mat sampling_box;                         ///< n x 2, columns are lower/upper bounds
};

/// Rate/exponent parameters of the predefined-time decrease condition,
/// including the derived constant gamma (see gamma_constant()).
struct PredefinedTimeParams {
  double alpha = 0, beta = 0;
  double p = 0, q = 0, r = 0;
  double predefined_time = 0;  ///< T_p, seconds
  double gamma = 0;            ///< derived rate constant
};

/// Parameters of a feedback strategy family; for the built-in problems both
/// players share [gamma1, gamma2].
struct StrategyParams {
  Vec control_params;
  Vec adversary_params;
};

/// Dynamics plus safe set; the running cost travels alongside explicitly.
struct GameModel {
  AffineDynamics dynamics;
  SafeSet safe_set;
};

/// f(x) + G(x)u + K(x)a with eager dimension validation.
Vec rhs(const AffineDynamics& dyn, const Vec& x, const Vec& u, const Vec& a);

/// L(x) + L_u(x)u + L_a(x)a + u'R_u u - a'R_a a.
double running_cost(const RunningCost& cost, const Vec& x, const Vec& u, const Vec& a);

/// H(x,u,a,lam) = r(x,u,a) + lam' (f + Gu + Ka).
double hamiltonian(const GameModel& model, const RunningCost& cost, const Vec& x,
                   const Vec& u, const Vec& a, const Vec& lam);

/// Rate constant
///   gamma = Gamma((1-rp)/(q-p)) Gamma((rq-1)/(q-p)) / (alpha^r Gamma(r) (q-p))
///           * (alpha/beta)^{(1-rp)/(q-p)},
/// requiring alpha,beta,p,q,r > 0, p r < 1 < q r, and p < q.
double gamma_constant(double alpha, double beta, double p, double q, double r);

/// Required decrease rate (gamma / T_p) (alpha v^p + beta v^q)^r for v >= 0;
/// zero for v <= 0.
double predefined_rate(const PredefinedTimeParams& ptp, double v);

/// Componentwise signed power |y_i|^eta sgn(y_i).
Vec signed_power(const Vec& y, double eta);

/// Scalar overload of signed_power.
double signed_power(double y, double eta);

}  // namespace ptsafe

#endif  // PTSAFE_GAME_MODEL_HPP
