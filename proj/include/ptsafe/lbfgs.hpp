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

#ifndef PTSAFE_LBFGS_HPP
#define PTSAFE_LBFGS_HPP

#include <functional>

#include "ptsafe/types.hpp"

namespace ptsafe {

/// Smooth objective: returns the value at w and writes the gradient into
/// `grad` (preallocated to the same size as w).
using Objective = std::function<double(const Vec& w, Vec& grad)>;

struct LbfgsConfig {
  int memory = 10;                    ///< stored curvature pairs
  int max_iterations = 2000;          ///< outer iteration cap
  double gradient_tolerance = 1e-9;   ///< stop when the max-norm of the gradient drops below
  double c1 = 1e-4;                   ///< sufficient-decrease constant
  double c2 = 0.9;                    ///< curvature constant (strong Wolfe)
  int max_line_search = 60;           ///< objective evaluations per line search
};

struct LbfgsResult {
  Vec w;                           ///< final iterate
  double value = 0.0;              ///< objective at the final iterate
  double grad_norm = 0.0;          ///< max-norm of the final gradient
  int iterations = 0;              ///< accepted steps
  int evaluations = 0;             ///< objective/gradient evaluations
  bool converged = false;          ///< gradient tolerance reached
  bool line_search_failed = false; ///< stopped because no acceptable step was found
};

/// Limited-memory BFGS with a bracketing strong-Wolfe line search.  Every
/// accepted step satisfies sufficient decrease, so the objective sequence is
/// non-increasing.  Deterministic: the iterate sequence is a pure function of
/// the starting point and the objective.
LbfgsResult minimize_lbfgs(const Objective& objective, Vec w0, const LbfgsConfig& config);

}  // namespace ptsafe

#endif  // PTSAFE_LBFGS_HPP
