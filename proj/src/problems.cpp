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

#include "ptsafe/problems.hpp"

#include <cmath>
#include <functional>

namespace ptsafe {

namespace {

using Wrapper = std::function<double(double)>;

void check_exponents(double gamma1, double gamma2) {
  if (!(gamma1 > 0.0 && gamma1 < 1.0)) {
    throw ConfigError("strategy exponent gamma1 must satisfy 0 < gamma1 < 1");
  }
  if (!(gamma2 > 1.0)) {
    throw ConfigError("strategy exponent gamma2 must satisfy gamma2 > 1");
  }
}

void check_dim2(const Vec& x) {
  if (x.size() != 2) {
    throw ConfigError("benchmark problems are two-dimensional, got state of size " +
                      std::to_string(x.size()));
  }
}

/// Component-wise shaped feedback scale:
///   c_i = spow(x_i, g1) / s_i^{(g1-1)/2} + spow(x_i, g2) / s_i^{(g2-1)/2}
/// where s carries one positive level value per component.
Vec shaped_scale(const Vec& x, const Vec& s, double gamma1, double gamma2) {
  return (signed_power(x, gamma1).array() / s.array().pow(0.5 * (gamma1 - 1.0)) +
          signed_power(x, gamma2).array() / s.array().pow(0.5 * (gamma2 - 1.0)))
      .matrix();
}

Vec drift2(const Vec& x) {
  check_dim2(x);
  Vec f(2);
  f(0) = -std::min(0.0, x(0));
  f(1) = -std::max(0.0, x(1));
  return f;
}

Vec bounded_levels(const Vec& x) {
  check_dim2(x);
  Vec s(2);
  s(0) = 1.0 - x(0) * x(0);
  s(1) = 1.0 - x(1) * x(1);
  return s;
}

void require_positive_levels(const Vec& s, const char* what) {
  if (!(s.minCoeff() > 0.0)) throw DomainError(what);
}

constexpr const char* kBoxMsg = "state is outside the open unit box safe set";
constexpr const char* kStripMsg = "state is outside the open strip safe set";

double unbounded_level(const Vec& x) {
  check_dim2(x);
  return 1.0 - x(1) * x(1);
}

RowVec bounded_value_grad(const Vec& x) {
  Vec s = bounded_levels(x);
  require_positive_levels(s, kBoxMsg);
  RowVec g(2);
  for (int i = 0; i < 2; ++i) {
    double xi = x(i);
    g(i) = (xi / s(i)) * (1.0 + xi * xi / s(i));
  }
  return g;
}

RowVec unbounded_value_grad(const Vec& x) {
  double s = unbounded_level(x);
  if (!(s > 0.0)) throw DomainError(kStripMsg);
  double n2 = x.squaredNorm();
  RowVec g(2);
  g(0) = x(0) / s;
  g(1) = (x(1) / s) * (1.0 + n2 / s);
  return g;
}

Wrapper make_wrapper_value(const std::string& wrapper_id) {
  if (wrapper_id == "exp") {
    return [](double y) { return std::exp(y); };
  }
  if (wrapper_id == "sigmoid") {
    return [](double y) {
      if (y >= 0.0) return 1.0 / (1.0 + std::exp(-y));
      double e = std::exp(y);
      return e / (1.0 + e);
    };
  }
  throw ConfigError("unknown wrapper id '" + wrapper_id +
                    "' (expected \"exp\" or \"sigmoid\")");
}

Wrapper make_wrapper_derivative(const std::string& wrapper_id) {
  Wrapper h = make_wrapper_value(wrapper_id);
  if (wrapper_id == "exp") return h;
  return [h](double y) {
    double v = h(y);
    return v * (1.0 - v);
  };
}

Wrapper make_wrapper_second(const std::string& wrapper_id) {
  Wrapper h = make_wrapper_value(wrapper_id);
  if (wrapper_id == "exp") return h;
  return [h](double y) {
    double v = h(y);
    return v * (1.0 - v) * (1.0 - 2.0 * v);
  };
}

}  // namespace

PredefinedTimeParams make_predefined_time_params(double gamma1, double gamma2,
                                                 double predefined_time) {
  check_exponents(gamma1, gamma2);
  if (!(predefined_time > 0.0)) {
    throw ConfigError("predefined_time must be positive");
  }
  PredefinedTimeParams ptp;
  ptp.p = 0.5 * (1.0 + gamma1);
  ptp.q = 0.5 * (1.0 + gamma2);
  ptp.r = 1.0;
  ptp.alpha = std::pow(2.0, ptp.p);
  ptp.beta = 2.0;
  ptp.predefined_time = predefined_time;
  ptp.gamma = gamma_constant(ptp.alpha, ptp.beta, ptp.p, ptp.q, ptp.r);
  return ptp;
}

BenchmarkProblem make_bounded_problem(double gamma1, double gamma2) {
  check_exponents(gamma1, gamma2);
  BenchmarkProblem prob;
  prob.id = "bounded";

  AffineDynamics& dyn = prob.model.dynamics;
  dyn.n = 2;
  dyn.m_u = 2;
  dyn.m_a = 2;
  dyn.drift = drift2;
  dyn.control_gain = [](const Vec& x) {
    check_dim2(x);
    return Mat::Identity(2, 2);
  };
  dyn.adversary_gain = dyn.control_gain;
  dyn.system_params = Vec();

  SafeSet& set = prob.model.safe_set;
  set.kind = SafeSet::Kind::bounded;
  set.level = [](const Vec& x) { return bounded_levels(x).minCoeff(); };
  set.sampling_box = Mat(2, 2);
  set.sampling_box << -1.0, 1.0, -1.0, 1.0;

  prob.strategy_params.control_params = Vec(2);
  prob.strategy_params.control_params << gamma1, gamma2;
  prob.strategy_params.adversary_params = prob.strategy_params.control_params;

  RunningCost& cost = prob.cost;
  cost.state_cost = [gamma1, gamma2](const Vec& x) {
    Vec s = bounded_levels(x);
    require_positive_levels(s, kBoxMsg);
    Vec c = shaped_scale(x, s, gamma1, gamma2);
    double value = 0.5 * c.squaredNorm();
    value += (x(0) / s(0)) * (1.0 + x(0) * x(0) / s(0)) * std::min(0.0, x(0));
    value += (x(1) / s(1)) * (1.0 + x(1) * x(1) / s(1)) * std::max(0.0, x(1));
    return value;
  };
  auto cross = [gamma1, gamma2](const Vec& x) -> RowVec {
    Vec s = bounded_levels(x);
    require_positive_levels(s, kBoxMsg);
    Vec c = shaped_scale(x, s, gamma1, gamma2);
    return c.transpose() - bounded_value_grad(x);
  };
  cost.control_cross = cross;
  cost.adversary_cross = cross;
  cost.control_weight = [](const Vec& x) {
    check_dim2(x);
    return Mat(0.25 * Mat::Identity(2, 2));
  };
  cost.adversary_weight = [](const Vec& x) {
    check_dim2(x);
    return Mat(0.5 * Mat::Identity(2, 2));
  };

  prob.exact.value = [](const Vec& x) {
    Vec s = bounded_levels(x);
    require_positive_levels(s, kBoxMsg);
    return 0.5 * (x.array().square() / s.array()).sum();
  };
  prob.exact.gradient = bounded_value_grad;

  prob.barrier = box_barrier();

  prob.closed_form.control = [gamma1, gamma2](const Vec& x) -> Vec {
    Vec s = bounded_levels(x);
    require_positive_levels(s, kBoxMsg);
    return -2.0 * shaped_scale(x, s, gamma1, gamma2);
  };
  prob.closed_form.adversary = [gamma1, gamma2](const Vec& x) -> Vec {
    Vec s = bounded_levels(x);
    require_positive_levels(s, kBoxMsg);
    return shaped_scale(x, s, gamma1, gamma2);
  };
  return prob;
}

BenchmarkProblem make_unbounded_problem(double gamma1, double gamma2) {
  check_exponents(gamma1, gamma2);
  BenchmarkProblem prob;
  prob.id = "unbounded";

  AffineDynamics& dyn = prob.model.dynamics;
  dyn.n = 2;
  dyn.m_u = 2;
  dyn.m_a = 2;
  dyn.drift = drift2;
  dyn.control_gain = [](const Vec& x) {
    check_dim2(x);
    return Mat::Identity(2, 2);
  };
  dyn.adversary_gain = dyn.control_gain;
  dyn.system_params = Vec();

  SafeSet& set = prob.model.safe_set;
  set.kind = SafeSet::Kind::unbounded;
  set.level = unbounded_level;
  set.sampling_box = Mat(2, 2);
  set.sampling_box << -2.0, 2.0, -1.0, 1.0;

  prob.strategy_params.control_params = Vec(2);
  prob.strategy_params.control_params << gamma1, gamma2;
  prob.strategy_params.adversary_params = prob.strategy_params.control_params;

  auto scale = [gamma1, gamma2](const Vec& x, double s) {
    Vec sv = Vec::Constant(2, s);
    return shaped_scale(x, sv, gamma1, gamma2);
  };

  RunningCost& cost = prob.cost;
  cost.state_cost = [scale](const Vec& x) {
    double s = unbounded_level(x);
    if (!(s > 0.0)) throw DomainError(kStripMsg);
    Vec c = scale(x, s);
    double n2 = x.squaredNorm();
    double value = 0.5 * c.squaredNorm();
    value += (x(0) / s) * std::min(0.0, x(0));
    value += (x(1) / s) * (1.0 + n2 / s) * std::max(0.0, x(1));
    return value;
  };
  auto cross = [scale](const Vec& x) -> RowVec {
    double s = unbounded_level(x);
    if (!(s > 0.0)) throw DomainError(kStripMsg);
    Vec c = scale(x, s);
    return c.transpose() - unbounded_value_grad(x);
  };
  cost.control_cross = cross;
  cost.adversary_cross = cross;
  cost.control_weight = [](const Vec& x) {
    check_dim2(x);
    return Mat(0.25 * Mat::Identity(2, 2));
  };
  cost.adversary_weight = [](const Vec& x) {
    check_dim2(x);
    return Mat(0.5 * Mat::Identity(2, 2));
  };

  prob.exact.value = [](const Vec& x) {
    double s = unbounded_level(x);
    if (!(s > 0.0)) throw DomainError(kStripMsg);
    return 0.5 * x.squaredNorm() / s;
  };
  prob.exact.gradient = unbounded_value_grad;

  prob.barrier = strip_barrier();

  prob.closed_form.control = [scale](const Vec& x) -> Vec {
    double s = unbounded_level(x);
    if (!(s > 0.0)) throw DomainError(kStripMsg);
    return -2.0 * scale(x, s);
  };
  prob.closed_form.adversary = [scale](const Vec& x) -> Vec {
    double s = unbounded_level(x);
    if (!(s > 0.0)) throw DomainError(kStripMsg);
    return scale(x, s);
  };
  return prob;
}

BenchmarkProblem make_problem(const std::string& id, double gamma1, double gamma2) {
  if (id == "bounded") return make_bounded_problem(gamma1, gamma2);
  if (id == "unbounded") return make_unbounded_problem(gamma1, gamma2);
  throw ConfigError("unknown example id '" + id +
                    "' (expected \"bounded\" or \"unbounded\")");
}

StrategyPair closed_form_pair(const std::string& example, double gamma1, double gamma2) {
  return make_problem(example, gamma1, gamma2).closed_form;
}

BarrierCandidate box_barrier(const std::string& wrapper_id) {
  BarrierCandidate b;
  b.id = "box";
  b.wrapper_id = wrapper_id;
  b.value = [](const Vec& x) {
    check_dim2(x);
    double total = 0.0;
    for (int i = 0; i < 2; ++i) {
      double d = 1.0 - std::abs(x(i));
      if (!(d > 0.0)) throw DomainError(kBoxMsg);
      total += x(i) * x(i) / d;
    }
    return total;
  };
  b.gradient = [](const Vec& x) {
    check_dim2(x);
    RowVec g(2);
    for (int i = 0; i < 2; ++i) {
      double xi = x(i);
      double d = 1.0 - std::abs(xi);
      if (!(d > 0.0)) throw DomainError(kBoxMsg);
      double sgn = (xi > 0.0) ? 1.0 : (xi < 0.0 ? -1.0 : 0.0);
      g(i) = (2.0 * xi * d + xi * xi * sgn) / (d * d);
    }
    return g;
  };
  b.wrapper = make_wrapper_value(wrapper_id);
  b.wrapper_derivative = make_wrapper_derivative(wrapper_id);
  b.wrapper_second = make_wrapper_second(wrapper_id);
  return b;
}

BarrierCandidate strip_barrier(const std::string& wrapper_id) {
  BarrierCandidate b;
  b.id = "strip";
  b.wrapper_id = wrapper_id;
  const double sqrt2 = std::sqrt(2.0);
  b.value = [sqrt2](const Vec& x) {
    check_dim2(x);
    double d = sqrt2 - std::sqrt(x(1) * x(1) + 1.0);
    if (!(d > 0.0)) throw DomainError(kStripMsg);
    return x.squaredNorm() / d;
  };
  b.gradient = [sqrt2](const Vec& x) {
    check_dim2(x);
    double root = std::sqrt(x(1) * x(1) + 1.0);
    double d = sqrt2 - root;
    if (!(d > 0.0)) throw DomainError(kStripMsg);
    RowVec g(2);
    g(0) = 2.0 * x(0) / d;
    g(1) = 2.0 * x(1) / d + x.squaredNorm() * (x(1) / root) / (d * d);
    return g;
  };
  b.wrapper = make_wrapper_value(wrapper_id);
  b.wrapper_derivative = make_wrapper_derivative(wrapper_id);
  b.wrapper_second = make_wrapper_second(wrapper_id);
  return b;
}

BarrierCandidate make_barrier(const std::string& barrier_id, const std::string& wrapper_id) {
  if (barrier_id == "box") return box_barrier(wrapper_id);
  if (barrier_id == "strip") return strip_barrier(wrapper_id);
  throw ConfigError("unknown barrier id '" + barrier_id +
                    "' (expected \"box\" or \"strip\")");
}

}  // namespace ptsafe
