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

#ifndef PTSAFE_STRATEGIES_HPP
#define PTSAFE_STRATEGIES_HPP

#include <functional>
#include <utility>

#include "ptsafe/game_model.hpp"
#include "ptsafe/types.hpp"

namespace ptsafe {

/// Feedback strategies of the two players; both vanish at the origin.
struct StrategyPair {
  std::function<Vec(const Vec&)> control;    ///< u*(x)
  std::function<Vec(const Vec&)> adversary;  ///< a*(x)
};

/// Minimizing feedback  u* = -1/2 R_u(x)^{-1} (L_u(x) + V'(x)G(x))'.
Vec nash_control(const GameModel& model, const RunningCost& cost,
                 const std::function<RowVec(const Vec&)>& valueGrad, const Vec& x);

/// Maximizing feedback  a* = +1/2 R_a(x)^{-1} (L_a(x) + V'(x)K(x))'.
Vec nash_adversary(const GameModel& model, const RunningCost& cost,
                   const std::function<RowVec(const Vec&)>& valueGrad, const Vec& x);

/// Builds the pair (nash_control, nash_adversary) bound to a value gradient.
StrategyPair strategy_pair_from_gradient(const GameModel& model, const RunningCost& cost,
                                         std::function<RowVec(const Vec&)> valueGrad);

/// Saddle gaps at (x,u,a):
///   first  = H(x,u*,a) - H(x,u*,a*)   (must be <= 0),
///   second = H(x,u,a*) - H(x,u*,a*)   (must be >= 0).
std::pair<double, double> saddle_gap(const GameModel& model, const RunningCost& cost,
                                     const std::function<RowVec(const Vec&)>& valueGrad,
                                     const Vec& x, const Vec& u, const Vec& a);

}  // namespace ptsafe

#endif  // PTSAFE_STRATEGIES_HPP
