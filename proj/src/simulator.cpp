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

#include "ptsafe/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace ptsafe {

namespace {

double median_of(Vec values) {
  std::vector<double> v(values.data(), values.data() + values.size());
  std::sort(v.begin(), v.end());
  const size_t m = v.size();
  if (m == 0) return 0.0;
  if (m % 2 == 1) return v[m / 2];
  return 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

}  // namespace

std::string sim_status_to_string(SimStatus status) {
  switch (status) {
    case SimStatus::complete: return "complete";
    case SimStatus::safety_violation: return "safety_violation";
    case SimStatus::numeric_error: return "numeric_error";
  }
  return "unknown";
}

Trajectory integrate(const GameModel& model, const RunningCost& cost,
                     const StrategyPair& strategies, const Vec& x0, const SimConfig& config) {
  if (!(config.step > 0.0)) throw ConfigError("simulation step must be positive");
  if (!(config.horizon > 0.0)) throw ConfigError("simulation horizon must be positive");
  if (!(config.stop_norm >= 0.0)) throw ConfigError("stop_norm must be non-negative");
  const int n = model.dynamics.n;
  if (x0.size() != n) {
    throw ConfigError("initial state has size " + std::to_string(x0.size()) +
                      ", model expects " + std::to_string(n));
  }

  Trajectory traj;
  traj.n = n;
  traj.m_u = model.dynamics.m_u;
  traj.m_a = model.dynamics.m_a;

  // Node times: full steps then one truncated step landing on the horizon.
  std::vector<double> node_times;
  const long nfull = static_cast<long>(std::floor(config.horizon / config.step + 1e-12));
  node_times.reserve(static_cast<size_t>(nfull) + 2);
  for (long i = 0; i <= nfull; ++i) node_times.push_back(static_cast<double>(i) * config.step);
  if (config.horizon - static_cast<double>(nfull) * config.step > 1e-12 * config.step) {
    node_times.push_back(config.horizon);
  }

  auto closed_loop = [&](const Vec& xx) -> Vec {
    return rhs(model.dynamics, xx, strategies.control(xx), strategies.adversary(xx));
  };

  Vec x = x0;
  bool settled = false;
  double min_level = std::numeric_limits<double>::infinity();

  for (size_t k = 0; k < node_times.size(); ++k) {
    const double t = node_times[k];
    if (!x.allFinite()) {
      traj.status = SimStatus::numeric_error;
      traj.message = "state became non-finite at t = " + fmt17(t);
      break;
    }
    if (!settled && x.norm() <= config.stop_norm) {
      settled = true;
      traj.settled_at = t;
      x.setZero();
    }
    const double level = model.safe_set.level(x);

    Vec u, a;
    double integrand = 0.0;
    if (settled) {
      u = Vec::Zero(traj.m_u);
      a = Vec::Zero(traj.m_a);
      integrand = running_cost(cost, x, u, a);
    } else {
      try {
        u = strategies.control(x);
        a = strategies.adversary(x);
        integrand = running_cost(cost, x, u, a);
      } catch (const DomainError& e) {
        traj.status = SimStatus::safety_violation;
        traj.message = std::string("strategy evaluation failed at t = ") + fmt17(t) + ": " +
                       e.what();
        break;
      }
    }

    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.controls.push_back(u);
    traj.adversaries.push_back(a);
    traj.cost_samples.push_back(integrand);
    traj.safety_levels.push_back(level);
    min_level = std::min(min_level, level);

    if (level < config.boundary_guard) {
      traj.status = SimStatus::safety_violation;
      traj.message = "safety level " + fmt17(level) + " fell below the boundary guard at t = " +
                     fmt17(t);
      break;
    }
    if (k + 1 == node_times.size()) break;

    if (!settled) {
      const double h = node_times[k + 1] - t;
      try {
        const Vec k1 = closed_loop(x);
        const Vec k2 = closed_loop(x + 0.5 * h * k1);
        const Vec k3 = closed_loop(x + 0.5 * h * k2);
        const Vec k4 = closed_loop(x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      } catch (const DomainError& e) {
        traj.status = SimStatus::safety_violation;
        traj.message = std::string("integration step left the safe set after t = ") + fmt17(t) +
                       ": " + e.what();
        break;
      }
    }
  }

  traj.min_safety_level =
      traj.safety_levels.empty() ? model.safe_set.level(x0) : min_level;
  return traj;
}

double accumulate_cost(const Trajectory& traj) {
  if (traj.status != SimStatus::complete) {
    throw DomainError("cost accumulation requires a complete trajectory (status: " +
                      sim_status_to_string(traj.status) + ")");
  }
  double total = 0.0;
  for (size_t k = 0; k + 1 < traj.times.size(); ++k) {
    total += 0.5 * (traj.cost_samples[k] + traj.cost_samples[k + 1]) *
             (traj.times[k + 1] - traj.times[k]);
  }
  return total;
}

std::optional<double> settling_time(const Trajectory& traj, double eps) {
  if (traj.states.empty()) return std::nullopt;
  std::ptrdiff_t last_outside = -1;
  for (size_t k = 0; k < traj.states.size(); ++k) {
    if (traj.states[k].norm() > eps) last_outside = static_cast<std::ptrdiff_t>(k);
  }
  const std::ptrdiff_t first_settled = last_outside + 1;
  if (first_settled >= static_cast<std::ptrdiff_t>(traj.states.size())) return std::nullopt;
  return traj.times[static_cast<size_t>(first_settled)];
}

double sae_scalar(double approx, double exact) {
  const double denom = std::abs(approx) + std::abs(exact);
  if (denom == 0.0) return 0.0;
  return std::abs(approx - exact) / denom;
}

double sae_vector(const Vec& approx, const Vec& exact) {
  if (approx.size() != exact.size()) {
    throw ConfigError("symmetric error needs vectors of equal size");
  }
  const double denom = approx.lpNorm<1>() + exact.lpNorm<1>();
  if (denom == 0.0) return 0.0;
  return (approx - exact).lpNorm<1>() / denom;
}

Mat evaluation_grid(const GameModel& model, int per_dim, double margin) {
  const int n = model.dynamics.n;
  if (per_dim < 2) throw ConfigError("evaluation grid needs at least 2 nodes per dimension");
  if (margin < 0.0) throw ConfigError("evaluation margin must be non-negative");
  if (model.safe_set.sampling_box.rows() != n || model.safe_set.sampling_box.cols() != 2) {
    throw ConfigError("sampling box must be n x 2");
  }
  std::vector<Vec> kept;
  std::vector<int> idx(static_cast<size_t>(n), 0);
  Vec x(n);
  while (true) {
    for (int i = 0; i < n; ++i) {
      const double lo = model.safe_set.sampling_box(i, 0);
      const double hi = model.safe_set.sampling_box(i, 1);
      x(i) = lo + (hi - lo) * static_cast<double>(idx[static_cast<size_t>(i)]) /
                      static_cast<double>(per_dim - 1);
    }
    if (model.safe_set.level(x) >= margin) kept.push_back(x);
    int d = n - 1;
    while (d >= 0) {
      if (++idx[static_cast<size_t>(d)] < per_dim) break;
      idx[static_cast<size_t>(d)] = 0;
      --d;
    }
    if (d < 0) break;
  }
  if (kept.empty()) {
    throw ConfigError("evaluation grid is empty; margin " + fmt17(margin) +
                      " excludes every node");
  }
  Mat points(n, static_cast<Eigen::Index>(kept.size()));
  for (size_t j = 0; j < kept.size(); ++j) points.col(static_cast<Eigen::Index>(j)) = kept[j];
  return points;
}

SurrogateMetrics evaluate_value_function(const BenchmarkProblem& problem,
                                         const std::function<double(const Vec&)>& value,
                                         const std::function<RowVec(const Vec&)>& gradient,
                                         const Mat& points) {
  const int count = static_cast<int>(points.cols());
  if (count < 1) throw ConfigError("evaluation needs at least one point");
  StrategyPair induced = strategy_pair_from_gradient(problem.model, problem.cost, gradient);

  SurrogateMetrics m;
  m.points = points;
  m.sae_value = Vec::Zero(count);
  m.sae_control = Vec::Zero(count);
  m.sae_adversary = Vec::Zero(count);
  for (int j = 0; j < count; ++j) {
    const Vec x = points.col(j);
    m.sae_value(j) = sae_scalar(value(x), problem.exact.value(x));
    m.sae_control(j) = sae_vector(induced.control(x), problem.closed_form.control(x));
    m.sae_adversary(j) = sae_vector(induced.adversary(x), problem.closed_form.adversary(x));
  }
  m.median_sae_value = median_of(m.sae_value);
  m.median_sae_control = median_of(m.sae_control);
  m.median_sae_adversary = median_of(m.sae_adversary);
  m.max_sae_value = m.sae_value.maxCoeff();
  m.max_sae_control = m.sae_control.maxCoeff();
  m.max_sae_adversary = m.sae_adversary.maxCoeff();
  return m;
}

SurrogateMetrics evaluate_surrogate(const BenchmarkProblem& problem,
                                    const SurrogateValue& surrogate, const Vec& w,
                                    const Mat& points) {
  return evaluate_value_function(
      problem, [&](const Vec& x) { return surrogate.value(w, x); },
      [&](const Vec& x) { return surrogate.gradient(w, x); }, points);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open trajectory file for writing: " + path);
  out << "t";
  for (int i = 1; i <= traj.n; ++i) out << ",x" << i;
  for (int i = 1; i <= traj.m_u; ++i) out << ",u" << i;
  for (int i = 1; i <= traj.m_a; ++i) out << ",a" << i;
  out << ",cost_integrand,s_level\n";
  for (size_t k = 0; k < traj.times.size(); ++k) {
    out << fmt17(traj.times[k]);
    for (int i = 0; i < traj.n; ++i) out << "," << fmt17(traj.states[k](i));
    for (int i = 0; i < traj.m_u; ++i) out << "," << fmt17(traj.controls[k](i));
    for (int i = 0; i < traj.m_a; ++i) out << "," << fmt17(traj.adversaries[k](i));
    out << "," << fmt17(traj.cost_samples[k]) << "," << fmt17(traj.safety_levels[k]) << "\n";
  }
  if (!out) throw ConfigError("failed while writing trajectory file: " + path);
}

void write_metrics_csv(const std::string& path, const SurrogateMetrics& metrics) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open metrics file for writing: " + path);
  const int n = static_cast<int>(metrics.points.rows());
  for (int i = 1; i <= n; ++i) out << "x" << i << ",";
  out << "sae_value,sae_control,sae_adversary\n";
  for (Eigen::Index j = 0; j < metrics.points.cols(); ++j) {
    for (int i = 0; i < n; ++i) out << fmt17(metrics.points(i, j)) << ",";
    out << fmt17(metrics.sae_value(j)) << "," << fmt17(metrics.sae_control(j)) << ","
        << fmt17(metrics.sae_adversary(j)) << "\n";
  }
  if (!out) throw ConfigError("failed while writing metrics file: " + path);
}

}  // namespace ptsafe
