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

#include "ptsafe/strategies.hpp"

#include <Eigen/Cholesky>

namespace ptsafe {

namespace {

// SPD solve R^{-1} b', reporting (never regularizing) indefinite weights.
Vec spd_solve(const Mat& R, const RowVec& b, const char* name) {
  Eigen::LLT<Mat> llt(R);
  if (llt.info() != Eigen::Success)
    throw NumericError(std::string(name) + " weight matrix is not positive definite");
  return llt.solve(b.transpose());
}

}  // namespace

Vec nash_control(const GameModel& model, const RunningCost& cost,
                 const std::function<RowVec(const Vec&)>& valueGrad, const Vec& x) {
  if (!(model.safe_set.level(x) > 0))
    throw DomainError("nash_control: state outside the safe set");
  const RowVec cu = cost.control_cross(x) + valueGrad(x) * model.dynamics.control_gain(x);
  return -0.5 * spd_solve(cost.control_weight(x), cu, "control");
}

Vec nash_adversary(const GameModel& model, const RunningCost& cost,
                   const std::function<RowVec(const Vec&)>& valueGrad, const Vec& x) {
  if (!(model.safe_set.level(x) > 0))
    throw DomainError("nash_adversary: state outside the safe set");
  const RowVec ca = cost.adversary_cross(x) + valueGrad(x) * model.dynamics.adversary_gain(x);
  return 0.5 * spd_solve(cost.adversary_weight(x), ca, "adversary");
}

StrategyPair strategy_pair_from_gradient(const GameModel& model, const RunningCost& cost,
                                         std::function<RowVec(const Vec&)> valueGrad) {
  StrategyPair pair;
  pair.control = [model, cost, valueGrad](const Vec& x) {
    return nash_control(model, cost, valueGrad, x);
  };
  pair.adversary = [model, cost, valueGrad](const Vec& x) {
    return nash_adversary(model, cost, valueGrad, x);
  };
  return pair;
}

std::pair<double, double> saddle_gap(const GameModel& model, const RunningCost& cost,
                                     const std::function<RowVec(const Vec&)>& valueGrad,
                                     const Vec& x, const Vec& u, const Vec& a) {
  const Vec us = nash_control(model, cost, valueGrad, x);
  const Vec as = nash_adversary(model, cost, valueGrad, x);
  const Vec lam = valueGrad(x).transpose();
  const double h_star = hamiltonian(model, cost, x, us, as, lam);
  const double gap_adversary = hamiltonian(model, cost, x, us, a, lam) - h_star;
  const double gap_control = hamiltonian(model, cost, x, u, as, lam) - h_star;
  return {gap_adversary, gap_control};
}

}  // namespace ptsafe
