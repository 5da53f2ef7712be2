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

#ifndef PTSAFE_BARRIER_VALUE_HPP
#define PTSAFE_BARRIER_VALUE_HPP

#include <functional>
#include <string>

#include "ptsafe/game_model.hpp"
#include "ptsafe/types.hpp"

namespace ptsafe {

/// Barrier factor B(x) and positive wrapper h(y) used by the value surrogate
/// V_hat(x,w) = h(V_NN(x,w)) * B(x).  B vanishes at the origin, is positive on
/// the rest of the safe set, and diverges toward its boundary (and toward
/// infinity when the safe set is unbounded).
struct BarrierCandidate {
  std::string id;          ///< "box" or "strip"
  std::string wrapper_id;  ///< "exp" or "sigmoid"
  std::function<double(const Vec&)> value;      ///< B(x)
  std::function<RowVec(const Vec&)> gradient;   ///< dB/dx, 1 x n
  std::function<double(double)> wrapper;             ///< h(y) > 0
  std::function<double(double)> wrapper_derivative;  ///< h'(y)
  std::function<double(double)> wrapper_second;      ///< h''(y)
};

/// Closed-form value function with its analytic gradient.
struct ExactValue {
  std::function<double(const Vec&)> value;     ///< V(x)
  std::function<RowVec(const Vec&)> gradient;  ///< V'(x), 1 x n
};

/// V = x1^2/(2 s1) + x2^2/(2 s2) with s_i = 1 - x_i^2, on the open unit box.
double bounded_value(const Vec& x);

/// V = |x|^2/(2 s) with s = 1 - x2^2, on the open horizontal strip.
double unbounded_value(const Vec& x);

/// Analytic gradient of an exact value (delegates to its stored gradient).
RowVec value_gradient(const ExactValue& exact, const Vec& x);

/// Inverse-optimality state cost L(x) = u*' R_u u* - V' f - a*' R_a a*,
/// with u*, a* the Nash strategies induced by the exact value gradient.
double inverse_state_cost(const GameModel& model, const RunningCost& cost,
                          const ExactValue& exact, const Vec& x);

/// Steady-state equation residual
///   L + V'f - 1/4 (V'G+L_u) R_u^{-1} (V'G+L_u)' + 1/4 (V'K+L_a) R_a^{-1} (V'K+L_a)'.
double hji_residual(const GameModel& model, const RunningCost& cost,
                    const std::function<double(const Vec&)>& valueFn,
                    const std::function<RowVec(const Vec&)>& valueGrad, const Vec& x);

/// Decrease-condition margin
///   V'(x) (f + G u* + K a*) + (gamma/T_p) (alpha V^p + beta V^q)^r;
/// nonpositive iff the predefined-time decrease condition holds at x.
double lyapunov_decrease_margin(const GameModel& model, const RunningCost& cost,
                                const std::function<double(const Vec&)>& valueFn,
                                const std::function<RowVec(const Vec&)>& valueGrad,
                                const PredefinedTimeParams& ptp, const Vec& x);

}  // namespace ptsafe

#endif  // PTSAFE_BARRIER_VALUE_HPP
