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

#ifndef PTSAFE_TRAINER_HPP
#define PTSAFE_TRAINER_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ptsafe/lbfgs.hpp"
#include "ptsafe/problems.hpp"
#include "ptsafe/value_net.hpp"

namespace ptsafe {

/// Constraint values above this count as violated in reports and metrics.
inline constexpr double kViolationThreshold = 1e-3;

/// Augmented-Lagrangian state: one multiplier per collocation point plus the
/// shared quadratic penalty weight.
struct Multipliers {
  double mu = 1e-4;
  Vec lambda;
  double growth = 2.0;
  int outer_iter = 0;
};

struct TrainConfig {
  int collocation_points = 2000;
  double collocation_margin = 0.1;  ///< sample where the safe-set level stays above this
  double mu0 = 1e-4;
  double growth = 2.0;
  int outer_iterations = 10;
  LbfgsConfig inner;
  bool frozen_indicator = false;  ///< freeze the penalty switch at the previous iterate
  std::uint64_t seed = 1;
};

/// One line of the training report; row 0 describes the freshly initialized
/// network before any optimization.
struct TrainReportRow {
  int outer_iter = 0;
  double mu = 0.0;               ///< penalty weight used by this solve
  int inner_iterations = 0;
  int inner_evaluations = 0;
  bool inner_converged = false;
  double augmented = 0.0;        ///< augmented objective after the solve
  double hji_loss = 0.0;         ///< sum of squared equation residuals
  double constraint_max = 0.0;   ///< max decrease-constraint value
  double violated_fraction = 0.0;
  double lambda_max = 0.0;       ///< largest multiplier after the update
};

struct TrainResult {
  Vec w;
  std::vector<TrainReportRow> rows;  ///< partial when failed is set
  Multipliers multipliers;
  bool failed = false;     ///< an inner solve broke down numerically
  std::string error;       ///< diagnostic when failed
};

/// Uniform collocation points over the sampling box, rejecting states whose
/// safe-set level falls below `margin`.  One point per column.
Mat sample_collocation(const GameModel& model, int count, double margin, std::uint64_t seed);

/// Grows the penalty weight and takes the clamped first-order multiplier step
///   lambda <- max(0, lambda + 2 mu l),  mu <- growth mu.
void update_multipliers(Multipliers& m, const Vec& constraint);

/// Trains a barrier-factored surrogate to satisfy the steady-state equation
/// while respecting the pointwise predefined-time decrease constraint, by an
/// augmented-Lagrangian outer loop over quasi-Newton inner solves.
class Trainer {
 public:
  Trainer(const BenchmarkProblem& problem, const PredefinedTimeParams& ptp,
          MlpConfig net_config, TrainConfig config);

  /// Same, but over caller-supplied collocation states (one per column)
  /// instead of seeded sampling.
  Trainer(const BenchmarkProblem& problem, const PredefinedTimeParams& ptp,
          MlpConfig net_config, TrainConfig config, Mat points);

  const SurrogateValue& surrogate() const { return surrogate_; }
  const Mat& collocation_points() const { return points_; }
  const TrainConfig& config() const { return config_; }

  /// Sum over collocation points of the squared equation residual.
  double hji_loss(const Vec& w) const;

  /// Decrease-constraint value at every collocation point.
  Vec constraint_values(const Vec& w) const;

  /// Augmented objective; when `grad` is non-null it receives the full
  /// parameter gradient.  Sums over points, no averaging.
  double augmented_loss(const Vec& w, const Multipliers& m, Vec* grad = nullptr) const;

  /// Runs the full outer loop from a seeded initialization.  The callback,
  /// when given, observes (outer_iter, params) for the initial state (0) and
  /// after every inner solve; rows collected so far survive inner failures.
  TrainResult run(const std::function<void(int, const Vec&)>& on_outer = {}) const;

 private:
  double objective(const Vec& w, Vec* grad, const Multipliers& m,
                   const std::vector<char>* frozen_active) const;
  std::vector<char> active_set(const Vec& w, const Multipliers& m) const;
  TrainReportRow report_row(const Vec& w, const Multipliers& m) const;

  BenchmarkProblem problem_;
  PredefinedTimeParams ptp_;
  TrainConfig config_;
  SurrogateValue surrogate_;
  Mat points_;                          ///< n x M collocation states
  std::vector<SurrogatePoint> cached_;  ///< barrier values at the points
  Vec r0_;                              ///< constant residual term per point
  Mat r1_;                              ///< linear residual term per point (n x M)
  std::vector<Mat> quad_;               ///< quadratic gradient form per point

  mutable MlpWorkspace ws_;
  mutable RowVec grad_x_, qbar_;
  mutable Vec ag_, x_;
};

}  // namespace ptsafe

#endif  // PTSAFE_TRAINER_HPP
