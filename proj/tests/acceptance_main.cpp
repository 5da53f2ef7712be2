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

/// Acceptance suite: one self-contained check per release criterion, each
/// printing a single PASS/FAIL line with the measured quantities.  Select a
/// subset with --criteria 1,2,7; the exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "ptsafe/barrier_value.hpp"
#include "ptsafe/experiment.hpp"

using namespace ptsafe;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail, double secs) {
  std::printf("%s criterion %d: %s [%.3f s]\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

ExperimentConfig desk_scale_config() {
  ExperimentConfig cfg;
  cfg.example = "bounded";
  return cfg;  // remaining defaults are the shipped desk-scale settings
}

/// Criterion 1: the closed-form rate constant at the benchmark parameters.
void criterion_gamma() {
  const auto t0 = Clock::now();
  const double g = gamma_constant(std::pow(2.0, 0.75), 2.0, 0.75, 1.25, 1.0);
  const double secs = seconds_since(t0);
  const bool pass = std::abs(g - 3.4259) <= 5e-4 && secs < 1.0;
  report(1, pass, "gamma = " + fmt17(g) + " (target 3.4259 +- 5e-4)", secs);
}

/// Criterion 2: the exact values annihilate the steady-state equation.
void criterion_residual() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::string worst_tag;
  for (const char* id : {"bounded", "unbounded"}) {
    const BenchmarkProblem prob = make_problem(id, 0.5, 1.5);
    const Mat pts = sample_collocation(prob.model, 10000, 0.01, 1002);
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      const double r = std::abs(hji_residual(prob.model, prob.cost, prob.exact.value,
                                             prob.exact.gradient, pts.col(j)));
      if (r > worst) {
        worst = r;
        worst_tag = id;
      }
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = worst <= 1e-8 && secs < 10.0;
  report(2, pass,
         "max |hji_residual| = " + fmt17(worst) + " (" + worst_tag +
             ", 10^4 pts/example, margin 0.01, limit 1e-8)",
         secs);
}

/// Criterion 3: saddle ordering and the exact quadratic gap identities.
void criterion_saddle() {
  const auto t0 = Clock::now();
  double worst_adv = -1e300, worst_ctrl = 1e300, worst_dev = 0.0;
  std::mt19937_64 gen(1003);
  for (const char* id : {"bounded", "unbounded"}) {
    const BenchmarkProblem prob = make_problem(id, 0.5, 1.5);
    const StrategyPair nash =
        strategy_pair_from_gradient(prob.model, prob.cost, prob.exact.gradient);
    const Mat pts = sample_collocation(prob.model, 50000, 0.05, 1003);
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      const Vec x = pts.col(j);
      Vec u(2), a(2);
      for (int i = 0; i < 2; ++i) {
        u(i) = 10.0 * (2.0 * uniform01(gen) - 1.0);
        a(i) = 10.0 * (2.0 * uniform01(gen) - 1.0);
      }
      const auto gaps = saddle_gap(prob.model, prob.cost, prob.exact.gradient, x, u, a);
      worst_adv = std::max(worst_adv, gaps.first);
      worst_ctrl = std::min(worst_ctrl, gaps.second);
      const Vec du = u - nash.control(x);
      const Vec da = a - nash.adversary(x);
      worst_dev = std::max(
          worst_dev, std::abs(gaps.first + da.dot(prob.cost.adversary_weight(x) * da)));
      worst_dev = std::max(
          worst_dev, std::abs(gaps.second - du.dot(prob.cost.control_weight(x) * du)));
    }
  }
  const double secs = seconds_since(t0);
  const bool pass =
      worst_adv <= 1e-9 && worst_ctrl >= -1e-9 && worst_dev <= 1e-10 && secs < 30.0;
  report(3, pass,
         "10^5 draws (state margin 0.05, inputs in [-10,10]^2): max adversary gap = " +
             fmt(worst_adv) + ", min control gap = " + fmt(worst_ctrl) +
             " (|.| <= 1e-9), max identity deviation = " + fmt(worst_dev) +
             " (limit 1e-10)",
         secs);
}

/// Criterion 4: the predefined-time decrease condition holds pointwise.
void criterion_decrease() {
  const auto t0 = Clock::now();
  const PredefinedTimeParams ptp = make_predefined_time_params(0.5, 1.5, 3.4259);
  double worst = -1e300;
  std::string worst_tag;
  for (const char* id : {"bounded", "unbounded"}) {
    const BenchmarkProblem prob = make_problem(id, 0.5, 1.5);
    const Mat pts = sample_collocation(prob.model, 10000, 0.01, 1004);
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      const double m = lyapunov_decrease_margin(prob.model, prob.cost, prob.exact.value,
                                                prob.exact.gradient, ptp, pts.col(j));
      if (m > worst) {
        worst = m;
        worst_tag = id;
      }
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = worst <= 1e-10 && secs < 10.0;
  report(4, pass,
         "max decrease margin = " + fmt17(worst) + " (" + worst_tag +
             ", 10^4 pts/example, limit 1e-10)",
         secs);
}

/// Criterion 5: exact strategies keep every trajectory safe and settle it by
/// the predefined time.
void criterion_settling() {
  const auto t0 = Clock::now();
  int safe_and_settled = 0, total = 0;
  double worst_norm = 0.0, worst_level = 1e300;
  for (const char* id : {"bounded", "unbounded"}) {
    const BenchmarkProblem prob = make_problem(id, 0.5, 1.5);
    const Mat x0s = sample_collocation(prob.model, 100, 0.05, 1005);
    SimConfig sc;  // step 1e-3, horizon 3.4259
    for (Eigen::Index j = 0; j < x0s.cols(); ++j) {
      const Trajectory traj = integrate(prob.model, prob.cost, prob.closed_form, x0s.col(j), sc);
      ++total;
      const double end_norm =
          traj.states.empty() ? 1e300 : traj.states.back().norm();
      worst_norm = std::max(worst_norm, end_norm);
      worst_level = std::min(worst_level, traj.min_safety_level);
      if (traj.status == SimStatus::complete && traj.min_safety_level > 0.0 &&
          end_norm <= 1e-3) {
        ++safe_and_settled;
      }
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = safe_and_settled == total && secs < 120.0;
  report(5, pass,
         std::to_string(safe_and_settled) + "/" + std::to_string(total) +
             " trajectories safe with ||x(3.4259)|| <= 1e-3 (worst norm " + fmt(worst_norm) +
             ", worst level " + fmt(worst_level) + ")",
         secs);
}

/// Criterion 6: the accumulated closed-loop cost reproduces the value.
void criterion_cost_equals_value() {
  const auto t0 = Clock::now();
  double worst_rel = 0.0;
  int total = 0, ok = 0;
  for (const char* id : {"bounded", "unbounded"}) {
    const BenchmarkProblem prob = make_problem(id, 0.5, 1.5);
    const Mat x0s = sample_collocation(prob.model, 20, 0.05, 1006);
    SimConfig sc;
    for (Eigen::Index j = 0; j < x0s.cols(); ++j) {
      const Trajectory traj = integrate(prob.model, prob.cost, prob.closed_form, x0s.col(j), sc);
      ++total;
      if (traj.status != SimStatus::complete) continue;
      const double jcost = accumulate_cost(traj);
      const double v = prob.exact.value(x0s.col(j));
      const double rel = std::abs(jcost - v) / std::max(v, 1e-6);
      worst_rel = std::max(worst_rel, rel);
      if (rel <= 0.02) ++ok;
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = ok == total && secs < 60.0;
  report(6, pass,
         std::to_string(ok) + "/" + std::to_string(total) +
             " starts with |J - V(x0)|/max(V,1e-6) <= 0.02 (worst " + fmt(worst_rel) + ")",
         secs);
}

/// Criterion 7: analytic derivatives (input, parameter, and the mixed path
/// through the input-gradient) agree with central finite differences.
void criterion_gradients() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(1007);
  double worst_rel = 0.0;
  int nets = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int layers = 1 + static_cast<int>(gen() % 3);
    const int width = 3 + static_cast<int>(gen() % 6);
    const bool sigmoid = (gen() % 2) == 0;
    const bool strip = (gen() % 2) == 0;
    const BenchmarkProblem prob = make_problem(strip ? "unbounded" : "bounded", 0.5, 1.5);
    MlpConfig net;
    net.hidden_layers = layers;
    net.hidden_width = width;
    net.activation = sigmoid ? Activation::sigmoid : Activation::tanh;
    const SurrogateValue sur(net, prob.barrier);
    Vec w = sur.initial_params(2000 + static_cast<std::uint64_t>(trial));
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) += 0.2 * (2.0 * uniform01(gen) - 1.0);

    Vec x(2);
    x << 0.6 * (2.0 * uniform01(gen) - 1.0), 0.6 * (2.0 * uniform01(gen) - 1.0);
    const SurrogatePoint pt = sur.barrier_at(x);
    MlpWorkspace ws = sur.make_workspace();

    // Input gradient against a central difference of the value.
    const RowVec gx = sur.gradient(w, x);
    for (int i = 0; i < 2; ++i) {
      const double h = 1e-6;
      Vec xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      const double fd = (sur.value(w, xp) - sur.value(w, xm)) / (2.0 * h);
      const double rel = std::abs(gx(i) - fd) / std::max({1.0, std::abs(fd), std::abs(gx(i))});
      worst_rel = std::max(worst_rel, rel);
    }

    // Parameter gradient of psi(w) = V^2 + |grad_x V|^2 (exercises the mixed
    // second-order path) against central differences in random coordinates.
    auto psi = [&](const Vec& ww, Vec* grad) {
      double v;
      RowVec g(2);
      sur.eval(ww, x, pt, ws, v, g);
      if (grad != nullptr) {
        grad->setZero();
        const RowVec gbar = 2.0 * g;
        sur.adjoint(ww, pt, ws, 2.0 * v, gbar, *grad);
      }
      return v * v + g.squaredNorm();
    };
    Vec grad(w.size());
    psi(w, &grad);
    for (int k = 0; k < 10; ++k) {
      const Eigen::Index i =
          static_cast<Eigen::Index>(gen() % static_cast<std::uint64_t>(w.size()));
      const double h = 1e-5 * std::max(1.0, std::abs(w(i)));
      Vec wp = w, wm = w;
      wp(i) += h;
      wm(i) -= h;
      const double fd = (psi(wp, nullptr) - psi(wm, nullptr)) / (2.0 * h);
      const double rel =
          std::abs(grad(i) - fd) / std::max({1.0, std::abs(fd), std::abs(grad(i))});
      worst_rel = std::max(worst_rel, rel);
    }
    ++nets;
  }
  const double secs = seconds_since(t0);
  const bool pass = worst_rel <= 1e-5 && nets == 100 && secs < 60.0;
  report(7, pass,
         "worst relative derivative error = " + fmt(worst_rel) + " over " +
             std::to_string(nets) + " random nets (limit 1e-5)",
         secs);
}

/// Shared state for criteria 8-10: one desk-scale training run.
struct TrainedState {
  ExperimentConfig cfg;
  TrainResult result;
  std::string report_body;
  double train_seconds = 0.0;
};

std::string report_body_for(const ExperimentConfig& cfg, const TrainResult& res) {
  const std::filesystem::path tmp =
      std::filesystem::temp_directory_path() /
      ("ptsafe_acceptance_report_" + std::to_string(::getpid()) + "_" +
       std::to_string(reinterpret_cast<std::uintptr_t>(&res)) + ".txt");
  write_training_report(tmp.string(), cfg, ptp_from_config(cfg), res.rows);
  std::ifstream in(tmp, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  in.close();
  std::filesystem::remove(tmp);
  return buf.str();
}

TrainResult run_desk_scale(const ExperimentConfig& cfg) {
  const BenchmarkProblem prob = problem_from_config(cfg);
  const Trainer trainer(prob, ptp_from_config(cfg), net_from_config(cfg),
                        train_config_from_config(cfg));
  return trainer.run([](int k, const Vec&) {
    std::printf("  training: outer %d done\n", k);
    std::fflush(stdout);
  });
}

std::optional<TrainedState>& trained_state() {
  static std::optional<TrainedState> state;
  return state;
}

const TrainedState& ensure_trained() {
  auto& state = trained_state();
  if (!state.has_value()) {
    const auto t0 = Clock::now();
    TrainedState s;
    s.cfg = desk_scale_config();
    s.result = run_desk_scale(s.cfg);
    s.report_body = report_body_for(s.cfg, s.result);
    s.train_seconds = seconds_since(t0);
    state = std::move(s);
  }
  return *state;
}

/// Criterion 8: desk-scale training quality on a held-out grid.
void criterion_training() {
  const auto t0 = Clock::now();
  const TrainedState& ts = ensure_trained();
  if (ts.result.failed) {
    report(8, false, "training failed: " + ts.result.error, seconds_since(t0));
    return;
  }
  const ExperimentConfig& cfg = ts.cfg;
  const BenchmarkProblem prob = problem_from_config(cfg);
  const SurrogateValue sur(net_from_config(cfg), prob.barrier);

  const Mat grid = evaluation_grid(prob.model, cfg.eval_grid, cfg.eval_margin);
  const SurrogateMetrics metrics = evaluate_surrogate(prob, sur, ts.result.w, grid);
  const double med_strategy =
      std::max(metrics.median_sae_control, metrics.median_sae_adversary);

  // Violations are measured on the collocation set of an identical trainer.
  const Trainer checker(prob, ptp_from_config(cfg), net_from_config(cfg),
                        train_config_from_config(cfg));
  const Vec constraint = checker.constraint_values(ts.result.w);
  const double violated =
      static_cast<double>((constraint.array() > kViolationThreshold).count()) /
      static_cast<double>(constraint.size());

  const double secs = seconds_since(t0);
  const bool pass = metrics.median_sae_value <= 0.05 && med_strategy <= 0.10 &&
                    violated <= 0.01 && ts.train_seconds <= 1800.0;
  report(8, pass,
         "median value-SAE = " + fmt(metrics.median_sae_value) +
             " (limit 0.05), median strategy-SAE = " + fmt(med_strategy) +
             " (limit 0.10), violated fraction = " + fmt(violated) +
             " (limit 0.01), training " + fmt(ts.train_seconds) + " s (limit 1800)",
         secs);
}

/// Criterion 9: the trained surrogate closes the loop safely and settles.
void criterion_trained_closed_loop() {
  const auto t0 = Clock::now();
  const TrainedState& ts = ensure_trained();
  if (ts.result.failed) {
    report(9, false, "training failed: " + ts.result.error, seconds_since(t0));
    return;
  }
  const ExperimentConfig& cfg = ts.cfg;
  const BenchmarkProblem prob = problem_from_config(cfg);
  auto sur = std::make_shared<SurrogateValue>(net_from_config(cfg), prob.barrier);
  auto w = std::make_shared<Vec>(ts.result.w);
  const StrategyPair strat = strategy_pair_from_gradient(
      prob.model, prob.cost, [sur, w](const Vec& x) { return sur->gradient(*w, x); });

  const Mat x0s = sample_collocation(prob.model, 50, 0.05, 1009);
  SimConfig sc;
  int good = 0;
  double worst_norm = 0.0;
  for (Eigen::Index j = 0; j < x0s.cols(); ++j) {
    const Trajectory traj = integrate(prob.model, prob.cost, strat, x0s.col(j), sc);
    const double end_norm = traj.states.empty() ? 1e300 : traj.states.back().norm();
    worst_norm = std::max(worst_norm, end_norm);
    if (traj.status == SimStatus::complete && traj.min_safety_level > 0.0 &&
        end_norm <= 1e-2) {
      ++good;
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = good >= 48;  // ceil(0.95 * 50)
  report(9, pass,
         std::to_string(good) + "/50 trained-loop trajectories safe with ||x(T_p)|| <= 1e-2" +
             " (worst end norm " + fmt(worst_norm) + ")",
         secs);
}

/// Criterion 10: retraining with the same seed reproduces the report bytes.
void criterion_determinism() {
  const auto t0 = Clock::now();
  const TrainedState& ts = ensure_trained();
  const TrainResult second = run_desk_scale(ts.cfg);
  const std::string body = report_body_for(ts.cfg, second);
  const bool same_bytes = (body == ts.report_body);
  const bool same_params =
      !ts.result.failed && !second.failed &&
      (second.w - ts.result.w).lpNorm<Eigen::Infinity>() == 0.0;
  const double secs = seconds_since(t0);
  report(10, same_bytes,
         std::string("repeat run report body ") +
             (same_bytes ? "is byte-identical" : "DIFFERS") + ", parameters " +
             (same_params ? "bit-identical" : "differ"),
         secs);
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criteria" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        const int k = std::atoi(tok.c_str());
        if (k < 1 || k > 10) {
          std::fprintf(stderr, "unknown criterion '%s' (expected 1..10)\n", tok.c_str());
          return 64;
        }
        selected.insert(k);
      }
    } else {
      std::fprintf(stderr, "usage: %s [--criteria 1,2,...]\n", argv[0]);
      return 64;
    }
  }
  if (selected.empty()) {
    for (int k = 1; k <= 10; ++k) selected.insert(k);
  }

  if (selected.count(1)) criterion_gamma();
  if (selected.count(2)) criterion_residual();
  if (selected.count(3)) criterion_saddle();
  if (selected.count(4)) criterion_decrease();
  if (selected.count(5)) criterion_settling();
  if (selected.count(6)) criterion_cost_equals_value();
  if (selected.count(7)) criterion_gradients();
  if (selected.count(8)) criterion_training();
  if (selected.count(9)) criterion_trained_closed_loop();
  if (selected.count(10)) criterion_determinism();

  if (g_failures == 0) {
    std::printf("all %zu selected criteria passed\n", selected.size());
  } else {
    std::printf("%d criterion(s) FAILED\n", g_failures);
  }
  return g_failures;
}
