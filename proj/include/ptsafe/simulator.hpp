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

#ifndef PTSAFE_SIMULATOR_HPP
#define PTSAFE_SIMULATOR_HPP

#include <optional>
#include <string>
#include <vector>

#include "ptsafe/problems.hpp"
#include "ptsafe/strategies.hpp"
#include "ptsafe/value_net.hpp"

namespace ptsafe {

struct SimConfig {
  double step = 1e-3;            ///< fixed integrator step, seconds
  double horizon = 3.4259;       ///< total simulated time, seconds
  double stop_norm = 1e-8;       ///< freeze at the origin once the state norm drops below
  double boundary_guard = 1e-6;  ///< abort when the safe-set level falls below
};

enum class SimStatus { complete, safety_violation, numeric_error };

std::string sim_status_to_string(SimStatus status);

/// Sampled closed-loop solution.  All per-sample lists stay aligned; on an
/// abnormal status the trajectory ends at the last healthy sample and
/// `message` carries the diagnostic.
struct Trajectory {
  SimStatus status = SimStatus::complete;
  int n = 0, m_u = 0, m_a = 0;  ///< dimensions, kept for writers even when empty
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<Vec> controls;
  std::vector<Vec> adversaries;
  std::vector<double> cost_samples;   ///< running-cost integrand per sample
  std::vector<double> safety_levels;  ///< s(x(t)) per sample
  double min_safety_level = 0.0;
  std::optional<double> settled_at;   ///< freeze time, absent if never settled
  std::string message;
};

/// Classical fixed-step 4th-order integration of the closed loop
/// x' = f + G u(x) + K a(x).  Once the state norm falls below stop_norm the
/// state is frozen at the exact origin and zero samples are emitted for the
/// rest of the horizon.  A strategy domain error or a safety level below the
/// guard ends the trajectory with safety_violation; a non-finite state ends
/// it with numeric_error.
Trajectory integrate(const GameModel& model, const RunningCost& cost,
                     const StrategyPair& strategies, const Vec& x0, const SimConfig& config);

/// Trapezoidal integral of the recorded cost integrand over the whole
/// trajectory; requires a complete trajectory.
double accumulate_cost(const Trajectory& traj);

/// First sample time after which the state norm stays at or below eps; absent
/// if the trajectory never does.
std::optional<double> settling_time(const Trajectory& traj, double eps);

/// Symmetric absolute error |a-b| / (|a|+|b|), zero when both are zero.
double sae_scalar(double approx, double exact);

/// Vector form with 1-norms: ||a-b||_1 / (||a||_1+||b||_1), zero when both are zero.
double sae_vector(const Vec& approx, const Vec& exact);

/// Per-point symmetric-error comparison of a surrogate against the exact
/// value and strategies, plus summary statistics.
struct SurrogateMetrics {
  Mat points;          ///< n x E evaluation states
  Vec sae_value;
  Vec sae_control;
  Vec sae_adversary;
  double median_sae_value = 0.0;
  double median_sae_control = 0.0;
  double median_sae_adversary = 0.0;
  double max_sae_value = 0.0;
  double max_sae_control = 0.0;
  double max_sae_adversary = 0.0;
};

/// Uniform grid over the sampling box (per_dim nodes per dimension), keeping
/// points whose safe-set level is at least margin.
Mat evaluation_grid(const GameModel& model, int per_dim, double margin);

/// Evaluates value and induced equilibrium strategies of the surrogate
/// against the problem's exact solution on the given points (one per column).
SurrogateMetrics evaluate_surrogate(const BenchmarkProblem& problem,
                                    const SurrogateValue& surrogate, const Vec& w,
                                    const Mat& points);

/// As above but for an arbitrary pair of (value, gradient) callables; used to
/// compare the exact solution against itself in the pass-through tests.
SurrogateMetrics evaluate_value_function(const BenchmarkProblem& problem,
                                         const std::function<double(const Vec&)>& value,
                                         const std::function<RowVec(const Vec&)>& gradient,
                                         const Mat& points);

/// Writes `t,x1,...,xn,u1,...,um,a1,...,am,cost_integrand,s_level` rows with
/// 17 significant digits.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Writes one row per evaluation point: coordinates then the three SAE columns.
void write_metrics_csv(const std::string& path, const SurrogateMetrics& metrics);

}  // namespace ptsafe

#endif  // PTSAFE_SIMULATOR_HPP
