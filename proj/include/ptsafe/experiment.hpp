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

#ifndef PTSAFE_EXPERIMENT_HPP
#define PTSAFE_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ptsafe/simulator.hpp"
#include "ptsafe/trainer.hpp"

namespace ptsafe {

/// Complete experiment description as read from a JSON config file.  The
/// field set is exact: missing and unknown fields are both errors.
struct ExperimentConfig {
  std::string example;          ///< "bounded" | "unbounded"
  double gamma1 = 0.5;
  double gamma2 = 1.5;
  double predefined_time = 3.4259;
  int hidden_layers = 3;
  int hidden_width = 32;
  std::string activation = "tanh";
  std::string wrapper = "exp";
  int collocation_points = 2000;
  double collocation_margin = 0.1;
  double mu0 = 1e-4;
  double growth = 2.0;
  int outer_iterations = 10;
  int inner_memory = 10;
  int inner_max_iterations = 2000;
  double inner_tolerance = 1e-9;
  bool frozen_indicator = false;
  double sim_step = 1e-3;
  double sim_horizon = 3.4259;
  double stop_norm = 1e-8;
  double boundary_guard = 1e-6;
  int eval_grid = 41;
  double eval_margin = 0.1;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
};

/// Parses the strict-JSON config text; `origin` names the source in errors.
ExperimentConfig parse_config(const std::string& json_text, const std::string& origin);

/// Reads and parses a config file.
ExperimentConfig load_config(const std::string& path);

/// Cross-field validation with errors naming the violated constraint.
void validate_config(const ExperimentConfig& cfg);

BenchmarkProblem problem_from_config(const ExperimentConfig& cfg);
PredefinedTimeParams ptp_from_config(const ExperimentConfig& cfg);
MlpConfig net_from_config(const ExperimentConfig& cfg);
TrainConfig train_config_from_config(const ExperimentConfig& cfg);
SimConfig sim_config_from_config(const ExperimentConfig& cfg);

/// Deterministic training report: commented header echoing every choice that
/// affects the run, then a tab-separated table.  Timing lives in the metadata
/// sidecar so that identical runs produce identical report bytes.
void write_training_report(const std::string& path, const ExperimentConfig& cfg,
                           const PredefinedTimeParams& ptp,
                           const std::vector<TrainReportRow>& rows);

/// Reads initial states, one whitespace-separated n-vector per non-empty
/// line; lines starting with '#' are comments.
std::vector<Vec> load_initial_states(const std::string& path, int n);

/// Settings for the analytic verification suite.
struct VerifySettings {
  int points = 2000;
  double margin = 0.01;
  double input_box = 10.0;  ///< u, a sampled uniformly in [-input_box, input_box]^m
  std::uint64_t seed = 1;
};

/// Prints gamma (17 digits) and the implied predefined time for the given
/// rate parameters.  Returns the process exit code.
int cmd_gamma(double alpha, double beta, double p, double q, double r, std::ostream& out);

/// Runs the analytic oracle suite on a built-in example: equation residual,
/// saddle ordering and gap identities, decrease margin, and closed-form
/// versus gradient-derived strategy agreement.  Prints one pass/fail line per
/// check; returns 0 or the verification-failure exit code 3.
int cmd_verify_exact(const ExperimentConfig& cfg, const VerifySettings& settings,
                     std::ostream& out);

/// Trains per config; writes a checkpoint per outer iteration (including the
/// initial state), the training report, a manifest, and a metadata sidecar.
int cmd_train(const ExperimentConfig& cfg, std::ostream& out);

/// Simulates one trajectory per initial state under the exact strategies
/// (checkpoint == "exact") or a trained surrogate; writes one trajectory CSV
/// each plus a summary table.  Per-trajectory failures are recorded in the
/// summary and do not fail the batch.
int cmd_simulate(const ExperimentConfig& cfg, const std::string& checkpoint,
                 const std::string& x0_path, std::ostream& out);

/// Compares a surrogate checkpoint (or the exact solution for "exact")
/// against the closed-form solution on the evaluation grid; writes the
/// per-point metrics CSV and prints the medians.
int cmd_evaluate(const ExperimentConfig& cfg, const std::string& checkpoint,
                 std::ostream& out);

/// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitVerification = 3;

}  // namespace ptsafe

#endif  // PTSAFE_EXPERIMENT_HPP
