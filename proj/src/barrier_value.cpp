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

#include "ptsafe/barrier_value.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "ptsafe/strategies.hpp"

namespace ptsafe {

double bounded_value(const Vec& x) {
  if (x.size() != 2) throw ConfigError("bounded_value: expects a 2-state vector");
  const double s1 = 1.0 - x[0] * x[0];
  const double s2 = 1.0 - x[1] * x[1];
  if (!(s1 > 0 && s2 > 0))
    throw DomainError("bounded_value: state on or outside the unit box boundary");
  return x[0] * x[0] / (2.0 * s1) + x[1] * x[1] / (2.0 * s2);
}

double unbounded_value(const Vec& x) {
  if (x.size() != 2) throw ConfigError("unbounded_value: expects a 2-state vector");
  const double s = 1.0 - x[1] * x[1];
  if (!(s > 0)) throw DomainError("unbounded_value: |x2| must be < 1");
  return x.squaredNorm() / (2.0 * s);
}

RowVec value_gradient(const ExactValue& exact, const Vec& x) { return exact.gradient(x); }

double inverse_state_cost(const GameModel& model, const RunningCost& cost,
                          const ExactValue& exact, const Vec& x) {
  if (!(model.safe_set.level(x) > 0))
    throw DomainError("inverse_state_cost: state outside the safe set");
  const Vec us = nash_control(model, cost, exact.gradient, x);
  const Vec as = nash_adversary(model, cost, exact.gradient, x);
  const RowVec vg = exact.gradient(x);
  return us.dot(cost.control_weight(x) * us) - vg.dot(model.dynamics.drift(x)) -
         as.dot(cost.adversary_weight(x) * as);
}

double hji_residual(const GameModel& model, const RunningCost& cost,
                    const std::function<double(const Vec&)>& valueFn,
                    const std::function<RowVec(const Vec&)>& valueGrad, const Vec& x) {
  (void)valueFn;  // the steady-state residual depends on the gradient only
  if (!(model.safe_set.level(x) > 0))
    throw DomainError("hji_residual: state outside the safe set");
  const RowVec vg = valueGrad(x);
  const RowVec cu = vg * model.dynamics.control_gain(x) + cost.control_cross(x);
  const RowVec ca = vg * model.dynamics.adversary_gain(x) + cost.adversary_cross(x);
  Eigen::LLT<Mat> llt_u(cost.control_weight(x));
  Eigen::LLT<Mat> llt_a(cost.adversary_weight(x));
  if (llt_u.info() != Eigen::Success || llt_a.info() != Eigen::Success)
    throw NumericError("hji_residual: weight matrix is not positive definite");
  const double term_u = cu.dot(llt_u.solve(cu.transpose()));
  const double term_a = ca.dot(llt_a.solve(ca.transpose()));
  return cost.state_cost(x) + vg.dot(model.dynamics.drift(x)) - 0.25 * term_u +
         0.25 * term_a;
}

double lyapunov_decrease_margin(const GameModel& model, const RunningCost& cost,
                                const std::function<double(const Vec&)>& valueFn,
                                const std::function<RowVec(const Vec&)>& valueGrad,
                                const PredefinedTimeParams& ptp, const Vec& x) {
  if (!(model.safe_set.level(x) > 0))
    throw DomainError("lyapunov_decrease_margin: state outside the safe set");
  const Vec us = nash_control(model, cost, valueGrad, x);
  const Vec as = nash_adversary(model, cost, valueGrad, x);
  const Vec drift = rhs(model.dynamics, x, us, as);
  const double v = valueFn(x);
  const double vdot = valueGrad(x).dot(drift);
  return vdot + predefined_rate(ptp, v);
}

}  // namespace ptsafe
