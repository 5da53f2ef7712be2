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

#include "ptsafe/trainer.hpp"

#include <cmath>
#include <random>
#include <utility>

namespace ptsafe {

namespace {

/// Floor keeping the fractional-power penalty differentiable at zero value.
constexpr double kValueFloor = 1e-12;

double penalty(const PredefinedTimeParams& ptp, double v) {
  const double vc = std::max(v, kValueFloor);
  const double inner = ptp.alpha * std::pow(vc, ptp.p) + ptp.beta * std::pow(vc, ptp.q);
  return ptp.gamma / ptp.predefined_time * std::pow(inner, ptp.r);
}

double penalty_derivative(const PredefinedTimeParams& ptp, double v) {
  if (v <= kValueFloor) return 0.0;
  const double inner = ptp.alpha * std::pow(v, ptp.p) + ptp.beta * std::pow(v, ptp.q);
  const double inner_d =
      ptp.alpha * ptp.p * std::pow(v, ptp.p - 1.0) + ptp.beta * ptp.q * std::pow(v, ptp.q - 1.0);
  return ptp.gamma / ptp.predefined_time * ptp.r * std::pow(inner, ptp.r - 1.0) * inner_d;
}

Mat spd_solve_right(const Mat& weight, const Mat& rhs, const char* what) {
  Eigen::LLT<Mat> llt(weight);
  if (llt.info() != Eigen::Success) throw NumericError(what);
  return llt.solve(rhs);
}

}  // namespace

Mat sample_collocation(const GameModel& model, int count, double margin, std::uint64_t seed) {
  const int n = model.dynamics.n;
  if (count < 1) throw ConfigError("collocation sampling needs a positive point count");
  if (margin < 0.0) throw ConfigError("collocation margin must be non-negative");
  if (model.safe_set.sampling_box.rows() != n || model.safe_set.sampling_box.cols() != 2) {
    throw ConfigError("sampling box must be n x 2");
  }
  std::mt19937_64 gen(seed);
  Mat points(n, count);
  Vec x(n);
  const long max_attempts = 10000L * static_cast<long>(count);
  long attempts = 0;
  int accepted = 0;
  while (accepted < count) {
    if (++attempts > max_attempts) {
      throw ConfigError("collocation sampling rejected too many draws; margin " +
                        fmt17(margin) + " leaves almost no admissible volume");
    }
    for (int i = 0; i < n; ++i) {
      const double lo = model.safe_set.sampling_box(i, 0);
      const double hi = model.safe_set.sampling_box(i, 1);
      x(i) = lo + uniform01(gen) * (hi - lo);
    }
    if (model.safe_set.level(x) >= margin) {
      points.col(accepted++) = x;
    }
  }
  return points;
}

void update_multipliers(Multipliers& m, const Vec& constraint) {
  if (m.lambda.size() != constraint.size()) {
    throw ConfigError("multiplier update: got " + std::to_string(constraint.size()) +
                      " constraint values for " + std::to_string(m.lambda.size()) +
                      " multipliers");
  }
  m.lambda = (m.lambda + 2.0 * m.mu * constraint).cwiseMax(0.0);
  m.mu *= m.growth;
}

Trainer::Trainer(const BenchmarkProblem& problem, const PredefinedTimeParams& ptp,
                 MlpConfig net_config, TrainConfig config)
    : Trainer(problem, ptp, net_config, config,
              sample_collocation(problem.model, config.collocation_points,
                                 config.collocation_margin, config.seed)) {}

Trainer::Trainer(const BenchmarkProblem& problem, const PredefinedTimeParams& ptp,
                 MlpConfig net_config, TrainConfig config, Mat points)
    : problem_(problem),
      ptp_(ptp),
      config_(std::move(config)),
      surrogate_(net_config, problem.barrier),
      points_(std::move(points)) {
  const int n = problem_.model.dynamics.n;
  if (net_config.input_dim != n) {
    throw ConfigError("network input_dim " + std::to_string(net_config.input_dim) +
                      " does not match the state dimension " + std::to_string(n));
  }
  if (!(config_.mu0 > 0.0)) throw ConfigError("mu0 must be positive");
  if (!(config_.growth > 1.0)) throw ConfigError("penalty growth must exceed 1");
  if (config_.outer_iterations < 0) throw ConfigError("outer_iterations must be non-negative");
  if (points_.rows() != n || points_.cols() < 1) {
    throw ConfigError("collocation matrix must be n x M with M >= 1");
  }
  const int M = static_cast<int>(points_.cols());
  cached_.resize(static_cast<size_t>(M));
  r0_ = Vec::Zero(M);
  r1_ = Mat::Zero(n, M);
  quad_.resize(static_cast<size_t>(M));

  for (int j = 0; j < M; ++j) {
    const Vec x = points_.col(j);
    cached_[static_cast<size_t>(j)] = surrogate_.barrier_at(x);
    const RowVec lu = problem_.cost.control_cross(x);
    const RowVec la = problem_.cost.adversary_cross(x);
    const Mat gu = problem_.model.dynamics.control_gain(x);
    const Mat ka = problem_.model.dynamics.adversary_gain(x);
    const Mat ru = problem_.cost.control_weight(x);
    const Mat ra = problem_.cost.adversary_weight(x);
    const Vec ru_lu =
        spd_solve_right(ru, lu.transpose(), "control weight matrix is not positive definite");
    const Vec ra_la =
        spd_solve_right(ra, la.transpose(), "adversary weight matrix is not positive definite");
    const Mat ru_gt =
        spd_solve_right(ru, gu.transpose(), "control weight matrix is not positive definite");
    const Mat ra_kt =
        spd_solve_right(ra, ka.transpose(), "adversary weight matrix is not positive definite");
    r0_(j) = problem_.cost.state_cost(x) - 0.25 * lu.dot(ru_lu) + 0.25 * la.dot(ra_la);
    r1_.col(j) = problem_.model.dynamics.drift(x) - 0.5 * gu * ru_lu + 0.5 * ka * ra_la;
    quad_[static_cast<size_t>(j)] = -0.5 * gu * ru_gt + 0.5 * ka * ra_kt;
  }

  ws_ = surrogate_.make_workspace();
  grad_x_ = RowVec::Zero(n);
  qbar_ = RowVec::Zero(n);
  ag_ = Vec::Zero(n);
  x_ = Vec::Zero(n);
}

double Trainer::objective(const Vec& w, Vec* grad, const Multipliers& m,
                          const std::vector<char>* frozen_active) const {
  if (grad) grad->setZero();
  const int M = static_cast<int>(points_.cols());
  double total = 0.0;
  for (int j = 0; j < M; ++j) {
    const SurrogatePoint& pt = cached_[static_cast<size_t>(j)];
    x_ = points_.col(j);
    double vhat = 0.0;
    surrogate_.eval(w, x_, pt, ws_, vhat, grad_x_);
    ag_.noalias() = quad_[static_cast<size_t>(j)] * grad_x_.transpose();
    const double g_r1 = grad_x_.dot(r1_.col(j));
    const double g_a_g = grad_x_.dot(ag_);
    const double rho = r0_(j) + g_r1 + 0.5 * g_a_g;
    const double l = g_r1 + g_a_g + penalty(ptp_, vhat);
    const double lam = m.lambda(j);
    const bool active = frozen_active ? ((*frozen_active)[static_cast<size_t>(j)] != 0)
                                      : (l >= 0.0 || lam > 0.0);
    const double chi = active ? 1.0 : 0.0;
    total += rho * rho + m.mu * chi * l * l + lam * l;
    if (grad) {
      const double coeff = 2.0 * m.mu * chi * l + lam;
      const double sbar = coeff * penalty_derivative(ptp_, vhat);
      qbar_ = (2.0 * rho + coeff) * r1_.col(j).transpose() +
              (2.0 * rho + 2.0 * coeff) * ag_.transpose();
      surrogate_.adjoint(w, pt, ws_, sbar, qbar_, *grad);
    }
  }
  return total;
}

double Trainer::hji_loss(const Vec& w) const {
  const int M = static_cast<int>(points_.cols());
  double total = 0.0;
  for (int j = 0; j < M; ++j) {
    x_ = points_.col(j);
    double vhat = 0.0;
    surrogate_.eval(w, x_, cached_[static_cast<size_t>(j)], ws_, vhat, grad_x_);
    ag_.noalias() = quad_[static_cast<size_t>(j)] * grad_x_.transpose();
    const double rho = r0_(j) + grad_x_.dot(r1_.col(j)) + 0.5 * grad_x_.dot(ag_);
    if (!std::isfinite(rho)) {
      throw NumericError("equation residual overflowed at collocation point " +
                         std::to_string(j) + " (x = " + fmt17(x_(0)) + ", " +
                         fmt17(x_(x_.size() - 1)) + ")");
    }
    total += rho * rho;
  }
  return total;
}

Vec Trainer::constraint_values(const Vec& w) const {
  const int M = static_cast<int>(points_.cols());
  Vec out(M);
  for (int j = 0; j < M; ++j) {
    x_ = points_.col(j);
    double vhat = 0.0;
    surrogate_.eval(w, x_, cached_[static_cast<size_t>(j)], ws_, vhat, grad_x_);
    ag_.noalias() = quad_[static_cast<size_t>(j)] * grad_x_.transpose();
    out(j) = grad_x_.dot(r1_.col(j)) + grad_x_.dot(ag_) + penalty(ptp_, vhat);
    if (!std::isfinite(out(j))) {
      throw NumericError("decrease constraint overflowed at collocation point " +
                         std::to_string(j) + " (x = " + fmt17(x_(0)) + ", " +
                         fmt17(x_(x_.size() - 1)) + ")");
    }
  }
  return out;
}

double Trainer::augmented_loss(const Vec& w, const Multipliers& m, Vec* grad) const {
  return objective(w, grad, m, nullptr);
}

std::vector<char> Trainer::active_set(const Vec& w, const Multipliers& m) const {
  const Vec l = constraint_values(w);
  std::vector<char> active(static_cast<size_t>(l.size()), 0);
  for (Eigen::Index j = 0; j < l.size(); ++j) {
    active[static_cast<size_t>(j)] = (l(j) >= 0.0 || m.lambda(j) > 0.0) ? 1 : 0;
  }
  return active;
}

TrainReportRow Trainer::report_row(const Vec& w, const Multipliers& m) const {
  TrainReportRow row;
  row.hji_loss = hji_loss(w);
  const Vec l = constraint_values(w);
  row.constraint_max = l.maxCoeff();
  row.violated_fraction =
      static_cast<double>((l.array() > kViolationThreshold).count()) /
      static_cast<double>(l.size());
  row.lambda_max = (m.lambda.size() > 0) ? m.lambda.maxCoeff() : 0.0;
  return row;
}

TrainResult Trainer::run(const std::function<void(int, const Vec&)>& on_outer) const {
  const int M = static_cast<int>(points_.cols());
  Vec w = surrogate_.initial_params(config_.seed);
  Multipliers m;
  m.mu = config_.mu0;
  m.lambda = Vec::Zero(M);
  m.growth = config_.growth;
  m.outer_iter = 0;

  TrainResult result;
  {
    TrainReportRow row = report_row(w, m);
    row.outer_iter = 0;
    row.mu = m.mu;
    row.augmented = augmented_loss(w, m);
    result.rows.push_back(row);
  }
  if (on_outer) on_outer(0, w);

  for (int k = 1; k <= config_.outer_iterations; ++k) {
    try {
      std::vector<char> frozen;
      const std::vector<char>* frozen_ptr = nullptr;
      if (config_.frozen_indicator) {
        frozen = active_set(w, m);
        frozen_ptr = &frozen;
      }
      const double mu_used = m.mu;
      Objective obj = [&](const Vec& ww, Vec& gg) -> double {
        return objective(ww, &gg, m, frozen_ptr);
      };
      LbfgsResult inner = minimize_lbfgs(obj, w, config_.inner);
      w = inner.w;

      update_multipliers(m, constraint_values(w));
      m.outer_iter = k;

      TrainReportRow row = report_row(w, m);
      row.outer_iter = k;
      row.mu = mu_used;
      row.inner_iterations = inner.iterations;
      row.inner_evaluations = inner.evaluations;
      row.inner_converged = inner.converged;
      row.augmented = inner.value;
      result.rows.push_back(row);
    } catch (const NumericError& e) {
      result.failed = true;
      result.error = "outer iteration " + std::to_string(k) + ": " + e.what();
      break;
    }

    if (on_outer) on_outer(k, w);
  }

  result.w = w;
  result.multipliers = m;
  return result;
}

}  // namespace ptsafe
