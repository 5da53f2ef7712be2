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

#include "ptsafe/lbfgs.hpp"

#include <cmath>
#include <vector>

namespace ptsafe {

namespace {

struct Probe {
  double alpha = 0.0;
  double f = 0.0;
  double dphi = 0.0;  ///< directional derivative g(w + alpha p) . p
  Vec g;
  bool finite = false;
};

/// Minimizer of the cubic through (lo.alpha, lo.f, lo.dphi) and
/// (hi.alpha, hi.f, hi.dphi); falls back to bisection when degenerate.
double cubic_trial(const Probe& lo, const Probe& hi) {
  const double da = hi.alpha - lo.alpha;
  const double d1 = lo.dphi + hi.dphi - 3.0 * (lo.f - hi.f) / (lo.alpha - hi.alpha);
  const double disc = d1 * d1 - lo.dphi * hi.dphi;
  if (!(disc >= 0.0)) return lo.alpha + 0.5 * da;
  const double d2 = (da >= 0.0 ? 1.0 : -1.0) * std::sqrt(disc);
  const double denom = hi.dphi - lo.dphi + 2.0 * d2;
  if (denom == 0.0) return lo.alpha + 0.5 * da;
  double trial = hi.alpha - da * (hi.dphi + d2 - d1) / denom;
  const double a = std::min(lo.alpha, hi.alpha);
  const double b = std::max(lo.alpha, hi.alpha);
  const double margin = 0.1 * (b - a);
  if (!std::isfinite(trial) || trial < a + margin || trial > b - margin) {
    trial = lo.alpha + 0.5 * da;
  }
  return trial;
}

}  // namespace

LbfgsResult minimize_lbfgs(const Objective& objective, Vec w0, const LbfgsConfig& config) {
  if (config.memory < 1) throw ConfigError("optimizer memory must be at least 1");
  if (config.max_iterations < 0) throw ConfigError("optimizer max_iterations must be non-negative");
  if (!(config.c1 > 0.0 && config.c1 < config.c2 && config.c2 < 1.0)) {
    throw ConfigError("line search constants must satisfy 0 < c1 < c2 < 1");
  }
  if (config.max_line_search < 2) throw ConfigError("max_line_search must be at least 2");

  const Eigen::Index dim = w0.size();
  LbfgsResult result;
  result.w = std::move(w0);

  Vec g(dim);
  double f = objective(result.w, g);
  result.evaluations = 1;
  if (!std::isfinite(f) || !g.allFinite()) {
    throw NumericError("objective is not finite at the optimizer starting point");
  }

  const int mem = config.memory;
  std::vector<Vec> s_hist(static_cast<size_t>(mem)), y_hist(static_cast<size_t>(mem));
  std::vector<double> rho(static_cast<size_t>(mem), 0.0);
  std::vector<double> alpha_tmp(static_cast<size_t>(mem), 0.0);
  int stored = 0;
  int head = 0;  // index of the newest pair

  Vec p(dim), q(dim), w_try(dim), g_try(dim);

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    result.grad_norm = g.lpNorm<Eigen::Infinity>();
    if (result.grad_norm <= config.gradient_tolerance) {
      result.converged = true;
      break;
    }

    // Two-loop recursion for p = -H g.
    q = g;
    for (int i = 0; i < stored; ++i) {
      const size_t idx = static_cast<size_t>((head - i + mem) % mem);
      alpha_tmp[idx] = rho[idx] * s_hist[idx].dot(q);
      q.noalias() -= alpha_tmp[idx] * y_hist[idx];
    }
    if (stored > 0) {
      const size_t newest = static_cast<size_t>(head);
      const double gamma = s_hist[newest].dot(y_hist[newest]) / y_hist[newest].squaredNorm();
      q *= gamma;
    }
    for (int i = stored - 1; i >= 0; --i) {
      const size_t idx = static_cast<size_t>((head - i + mem) % mem);
      const double beta = rho[idx] * y_hist[idx].dot(q);
      q.noalias() += (alpha_tmp[idx] - beta) * s_hist[idx];
    }
    p = -q;

    double dphi0 = g.dot(p);
    if (!(dphi0 < 0.0)) {
      // Curvature information is unusable; restart from steepest descent.
      stored = 0;
      p = -g;
      dphi0 = -g.squaredNorm();
    }

    const double f0 = f;
    int budget = config.max_line_search;

    auto probe = [&](double alpha) -> Probe {
      Probe pt;
      pt.alpha = alpha;
      w_try = result.w + alpha * p;
      pt.f = objective(w_try, g_try);
      ++result.evaluations;
      --budget;
      pt.finite = std::isfinite(pt.f) && g_try.allFinite();
      pt.g = g_try;
      pt.dphi = pt.finite ? g_try.dot(p) : 0.0;
      return pt;
    };
    auto sufficient = [&](const Probe& pt) {
      return pt.finite && pt.f <= f0 + config.c1 * pt.alpha * dphi0;
    };
    auto curvature_ok = [&](const Probe& pt) {
      return std::abs(pt.dphi) <= -config.c2 * dphi0;
    };

    Probe lo;
    lo.alpha = 0.0;
    lo.f = f0;
    lo.dphi = dphi0;
    lo.g = g;
    lo.finite = true;

    Probe accepted;
    bool have_accepted = false;

    // Bracketing phase.
    double alpha = (iter == 0) ? std::min(1.0, 1.0 / g.norm()) : 1.0;
    Probe prev = lo;
    bool in_zoom = false;
    Probe zoom_lo, zoom_hi;
    while (budget > 0) {
      Probe cur = probe(alpha);
      if (!sufficient(cur) || (prev.alpha > 0.0 && cur.f >= prev.f)) {
        zoom_lo = prev;
        zoom_hi = cur;
        in_zoom = true;
        break;
      }
      if (curvature_ok(cur)) {
        accepted = cur;
        have_accepted = true;
        break;
      }
      if (cur.dphi >= 0.0) {
        zoom_lo = cur;
        zoom_hi = prev;
        in_zoom = true;
        break;
      }
      prev = cur;
      alpha *= 2.0;
    }
    if (!in_zoom && !have_accepted && prev.alpha > 0.0) {
      // Bracketing ran out of budget; the last probe still gives sufficient
      // decrease along a descent direction.
      accepted = prev;
      have_accepted = true;
    }

    // Zoom phase: zoom_lo satisfies sufficient decrease, the minimizer lies
    // between zoom_lo and zoom_hi.
    if (in_zoom) {
      while (budget > 0) {
        double trial;
        if (zoom_lo.finite && zoom_hi.finite) {
          trial = cubic_trial(zoom_lo, zoom_hi);
        } else {
          trial = 0.5 * (zoom_lo.alpha + zoom_hi.alpha);
        }
        if (std::abs(zoom_hi.alpha - zoom_lo.alpha) <
            1e-14 * std::max(1.0, std::abs(zoom_lo.alpha))) {
          break;
        }
        Probe cur = probe(trial);
        if (!sufficient(cur) || cur.f >= zoom_lo.f) {
          zoom_hi = cur;
        } else {
          if (curvature_ok(cur)) {
            accepted = cur;
            have_accepted = true;
            break;
          }
          if (cur.dphi * (zoom_hi.alpha - zoom_lo.alpha) >= 0.0) {
            zoom_hi = zoom_lo;
          }
          zoom_lo = cur;
        }
      }
      // Fall back to the best sufficient-decrease point when the curvature
      // condition was never met within budget.
      if (!have_accepted && zoom_lo.alpha > 0.0 && sufficient(zoom_lo)) {
        accepted = zoom_lo;
        have_accepted = true;
      }
    }

    if (!have_accepted) {
      result.line_search_failed = true;
      break;
    }

    // Curvature pair from the accepted step.
    w_try = result.w + accepted.alpha * p;
    Vec s = w_try - result.w;
    Vec y = accepted.g - g;
    const double sy = s.dot(y);
    result.w = w_try;
    f = accepted.f;
    g = accepted.g;
    result.iterations = iter + 1;
    if (sy > 1e-10 * s.norm() * y.norm()) {
      head = (stored == 0) ? 0 : (head + 1) % mem;
      const size_t hidx = static_cast<size_t>(head);
      s_hist[hidx] = std::move(s);
      y_hist[hidx] = std::move(y);
      rho[hidx] = 1.0 / sy;
      if (stored < mem) ++stored;
    }
  }

  result.value = f;
  result.grad_norm = g.lpNorm<Eigen::Infinity>();
  if (result.grad_norm <= config.gradient_tolerance) result.converged = true;
  return result;
}

}  // namespace ptsafe
