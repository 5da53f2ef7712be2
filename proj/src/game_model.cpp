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

#include "ptsafe/game_model.hpp"

#include <cmath>

namespace ptsafe {

namespace {

void check_dims(const AffineDynamics& dyn, const Vec& x, const Vec& u, const Vec& a) {
  if (x.size() != dyn.n)
    throw ConfigError("rhs: state dimension " + std::to_string(x.size()) +
                      " does not match model n=" + std::to_string(dyn.n));
  if (u.size() != dyn.m_u)
    throw ConfigError("rhs: control dimension " + std::to_string(u.size()) +
                      " does not match model m_u=" + std::to_string(dyn.m_u));
  if (a.size() != dyn.m_a)
    throw ConfigError("rhs: adversary dimension " + std::to_string(a.size()) +
                      " does not match model m_a=" + std::to_string(dyn.m_a));
}

}  // namespace

Vec rhs(const AffineDynamics& dyn, const Vec& x, const Vec& u, const Vec& a) {
  check_dims(dyn, x, u, a);
  return dyn.drift(x) + dyn.control_gain(x) * u + dyn.adversary_gain(x) * a;
}

double running_cost(const RunningCost& cost, const Vec& x, const Vec& u, const Vec& a) {
  const RowVec lu = cost.control_cross(x);
  const RowVec la = cost.adversary_cross(x);
  if (lu.size() != u.size())
    throw ConfigError("running_cost: control dimension mismatch");
  if (la.size() != a.size())
    throw ConfigError("running_cost: adversary dimension mismatch");
  return cost.state_cost(x) + lu.dot(u) + la.dot(a) +
         u.dot(cost.control_weight(x) * u) - a.dot(cost.adversary_weight(x) * a);
}

double hamiltonian(const GameModel& model, const RunningCost& cost, const Vec& x,
                   const Vec& u, const Vec& a, const Vec& lam) {
  if (lam.size() != model.dynamics.n)
    throw ConfigError("hamiltonian: costate dimension mismatch");
  return running_cost(cost, x, u, a) + lam.dot(rhs(model.dynamics, x, u, a));
}

double gamma_constant(double alpha, double beta, double p, double q, double r) {
  if (!(alpha > 0)) throw DomainError("gamma_constant: requires alpha > 0");
  if (!(beta > 0)) throw DomainError("gamma_constant: requires beta > 0");
  if (!(p > 0 && q > 0 && r > 0))
    throw DomainError("gamma_constant: requires p, q, r > 0");
  if (!(p * r < 1)) throw DomainError("gamma_constant: requires p*r < 1");
  if (!(q * r > 1)) throw DomainError("gamma_constant: requires q*r > 1");
  if (!(q > p)) throw DomainError("gamma_constant: requires q > p");
  const double a1 = (1.0 - r * p) / (q - p);
  const double a2 = (r * q - 1.0) / (q - p);
  return std::tgamma(a1) * std::tgamma(a2) /
         (std::pow(alpha, r) * std::tgamma(r) * (q - p)) * std::pow(alpha / beta, a1);
}

double predefined_rate(const PredefinedTimeParams& ptp, double v) {
  if (!(v > 0.0)) return 0.0;
  const double inner = ptp.alpha * std::pow(v, ptp.p) + ptp.beta * std::pow(v, ptp.q);
  return ptp.gamma / ptp.predefined_time * std::pow(inner, ptp.r);
}

double signed_power(double y, double eta) {
  if (y > 0) return std::pow(y, eta);
  if (y < 0) return -std::pow(-y, eta);
  return 0.0;
}

Vec signed_power(const Vec& y, double eta) {
  Vec out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = signed_power(y[i], eta);
  return out;
}

}  // namespace ptsafe
