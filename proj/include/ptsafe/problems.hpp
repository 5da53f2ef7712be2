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

#ifndef PTSAFE_PROBLEMS_HPP
#define PTSAFE_PROBLEMS_HPP

#include <string>

#include "ptsafe/barrier_value.hpp"
#include "ptsafe/game_model.hpp"
#include "ptsafe/strategies.hpp"

namespace ptsafe {

/// A fully assembled benchmark instance: game model, running cost, exact
/// value, barrier candidate, and the closed-form equilibrium strategies.
struct BenchmarkProblem {
  std::string id;  ///< "bounded" or "unbounded"
  GameModel model;
  RunningCost cost;
  StrategyParams strategy_params;
  ExactValue exact;
  BarrierCandidate barrier;
  StrategyPair closed_form;
};

/// Predefined-time parameters induced by the strategy exponents for the
/// two-state benchmarks: p=(1+gamma1)/2, q=(1+gamma2)/2, r=1, alpha=2^p,
/// beta=2, gamma from gamma_constant.  Requires 0 < gamma1 < 1 < gamma2.
PredefinedTimeParams make_predefined_time_params(double gamma1, double gamma2,
                                                 double predefined_time);

/// Two-state game on the open unit box, safe set level min_i(1 - x_i^2).
BenchmarkProblem make_bounded_problem(double gamma1, double gamma2);

/// Two-state game on the open strip |x2| < 1, unbounded in x1.
BenchmarkProblem make_unbounded_problem(double gamma1, double gamma2);

/// Dispatch by id ("bounded" | "unbounded").
BenchmarkProblem make_problem(const std::string& id, double gamma1, double gamma2);

/// The displayed closed-form equilibrium strategies of a benchmark instance.
StrategyPair closed_form_pair(const std::string& example, double gamma1, double gamma2);

/// Barrier factor for the unit box with a selectable wrapper ("exp" default).
BarrierCandidate box_barrier(const std::string& wrapper_id = "exp");

/// Barrier factor for the strip with a selectable wrapper ("sigmoid" default).
BarrierCandidate strip_barrier(const std::string& wrapper_id = "sigmoid");

/// Dispatch by barrier id ("box" | "strip").
BarrierCandidate make_barrier(const std::string& barrier_id, const std::string& wrapper_id);

}  // namespace ptsafe

#endif  // PTSAFE_PROBLEMS_HPP
