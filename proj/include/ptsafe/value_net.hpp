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

#ifndef PTSAFE_VALUE_NET_HPP
#define PTSAFE_VALUE_NET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ptsafe/barrier_value.hpp"
#include "ptsafe/types.hpp"

namespace ptsafe {

enum class Activation { tanh, sigmoid };

Activation activation_from_string(const std::string& name);
std::string activation_to_string(Activation act);

/// Architecture of the fully connected raw network.
struct MlpConfig {
  int input_dim = 2;
  int hidden_layers = 3;
  int hidden_width = 32;
  Activation activation = Activation::tanh;
};

/// Reusable per-evaluation scratch.  The forward pass stores activations and
/// the propagated input-Jacobian rows so the reverse pass can run without
/// re-evaluating the network.
struct MlpWorkspace {
  std::vector<Vec> z;  ///< z[0] = x, z[l] = activations of hidden layer l
  std::vector<Mat> T;  ///< T[l] = W_l J_{l-1} (pre-activation Jacobian), l >= 1
  std::vector<Mat> J;  ///< J[0] = I, J[l] = d(z_l)/dx
  double v = 0.0;      ///< raw network output
  RowVec g;            ///< raw network input gradient dv/dx

  // Reverse-pass scratch.
  Vec zbar, tbar, d, dd, rowdot;
  Mat jbar, tbar_mat;
  RowVec gbar_scratch;
};

/// Scalar-output multilayer perceptron with an analytic forward pass for
/// (value, input gradient) and a matching reverse pass that accumulates the
/// parameter gradient of any linear functional of the two outputs.
class Mlp {
 public:
  explicit Mlp(MlpConfig config);

  const MlpConfig& config() const { return config_; }
  int param_count() const { return param_count_; }

  /// Glorot-uniform weights, zero biases, from a self-contained generator so
  /// the draw is reproducible across platforms.
  Vec glorot_init(std::uint64_t seed) const;

  MlpWorkspace make_workspace() const;

  /// Computes v(x) and g(x) = dv/dx, leaving intermediates in `ws`.
  void eval(const Vec& w, const Vec& x, MlpWorkspace& ws) const;

  /// Accumulates d(value_bar * v + grad_bar . g)/dw into `param_grad` using
  /// the intermediates stored by the matching eval call.
  void adjoint(const Vec& w, MlpWorkspace& ws, double value_bar,
               const RowVec& grad_bar, Vec& param_grad) const;

  int weight_offset(int layer) const { return w_off_[static_cast<size_t>(layer)]; }
  int bias_offset(int layer) const { return b_off_[static_cast<size_t>(layer)]; }
  int output_weight_offset() const { return out_w_off_; }
  int output_bias_offset() const { return out_b_off_; }
  /// Input dimension of hidden layer `layer` (0-based).
  int layer_input_dim(int layer) const;

 private:
  MlpConfig config_;
  std::vector<int> w_off_, b_off_;
  int out_w_off_ = 0;
  int out_b_off_ = 0;
  int param_count_ = 0;
};

/// Barrier data cached for a fixed collocation point.
struct SurrogatePoint {
  double barrier = 0.0;  ///< B(x)
  RowVec barrier_grad;   ///< dB/dx
};

/// Barrier-factored value surrogate V(x) = h(v(x)) B(x), where v is the raw
/// network output and h a positive wrapper.  The factorization pins V(0) = 0
/// and keeps the surrogate sign-definite without output clamping.
class SurrogateValue {
 public:
  SurrogateValue(MlpConfig config, BarrierCandidate barrier);

  const Mlp& net() const { return net_; }
  const BarrierCandidate& barrier() const { return barrier_; }
  int param_count() const { return net_.param_count(); }
  Vec initial_params(std::uint64_t seed) const { return net_.glorot_init(seed); }
  MlpWorkspace make_workspace() const { return net_.make_workspace(); }

  SurrogatePoint barrier_at(const Vec& x) const;

  /// Computes value and spatial gradient at a point whose barrier data is
  /// already cached; intermediates stay in `ws` for the adjoint call.
  void eval(const Vec& w, const Vec& x, const SurrogatePoint& pt, MlpWorkspace& ws,
            double& value, RowVec& grad_x) const;

  /// Accumulates d(value_bar * V + grad_bar . dV/dx)/dw into `param_grad`.
  /// Must follow an eval call on the same workspace and point.
  void adjoint(const Vec& w, const SurrogatePoint& pt, MlpWorkspace& ws,
               double value_bar, const RowVec& grad_bar, Vec& param_grad) const;

  /// Convenience single-point entry points (allocate their own workspace).
  double value(const Vec& w, const Vec& x) const;
  RowVec gradient(const Vec& w, const Vec& x) const;

 private:
  Mlp net_;
  BarrierCandidate barrier_;
};

/// Trained-surrogate snapshot: architecture, factorization ids, and the flat
/// parameter vector.
struct Checkpoint {
  MlpConfig config;
  std::string wrapper_id;
  std::string barrier_id;
  std::uint64_t seed = 0;
  int outer_iter = 0;
  Vec params;
};

/// Plain-text checkpoint, one named header field per line then one parameter
/// per line with 17 significant digits.
void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ptsafe

#endif  // PTSAFE_VALUE_NET_HPP
