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

#include "ptsafe/value_net.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <utility>

namespace ptsafe {

namespace {

double stable_sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

Activation activation_from_string(const std::string& name) {
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  throw ConfigError("unknown activation '" + name +
                    "' (expected \"tanh\" or \"sigmoid\")");
}

std::string activation_to_string(Activation act) {
  return act == Activation::tanh ? "tanh" : "sigmoid";
}

Mlp::Mlp(MlpConfig config) : config_(config) {
  if (config_.input_dim < 1) throw ConfigError("network input_dim must be at least 1");
  if (config_.hidden_layers < 1) throw ConfigError("network hidden_layers must be at least 1");
  if (config_.hidden_width < 1) throw ConfigError("network hidden_width must be at least 1");
  int off = 0;
  for (int l = 0; l < config_.hidden_layers; ++l) {
    w_off_.push_back(off);
    off += config_.hidden_width * layer_input_dim(l);
    b_off_.push_back(off);
    off += config_.hidden_width;
  }
  out_w_off_ = off;
  off += config_.hidden_width;
  out_b_off_ = off;
  off += 1;
  param_count_ = off;
}

int Mlp::layer_input_dim(int layer) const {
  return layer == 0 ? config_.input_dim : config_.hidden_width;
}

Vec Mlp::glorot_init(std::uint64_t seed) const {
  std::mt19937_64 gen(seed);
  Vec w = Vec::Zero(param_count_);
  for (int l = 0; l < config_.hidden_layers; ++l) {
    const int fan_in = layer_input_dim(l);
    const int fan_out = config_.hidden_width;
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    const int count = fan_in * fan_out;
    for (int k = 0; k < count; ++k) {
      w(w_off_[static_cast<size_t>(l)] + k) = a * (2.0 * uniform01(gen) - 1.0);
    }
  }
  const double a = std::sqrt(6.0 / static_cast<double>(config_.hidden_width + 1));
  for (int k = 0; k < config_.hidden_width; ++k) {
    w(out_w_off_ + k) = a * (2.0 * uniform01(gen) - 1.0);
  }
  return w;
}

MlpWorkspace Mlp::make_workspace() const {
  MlpWorkspace ws;
  const int L = config_.hidden_layers;
  const int width = config_.hidden_width;
  const int n = config_.input_dim;
  ws.z.resize(static_cast<size_t>(L) + 1);
  ws.T.resize(static_cast<size_t>(L) + 1);
  ws.J.resize(static_cast<size_t>(L) + 1);
  ws.z[0] = Vec::Zero(n);
  ws.J[0] = Mat::Identity(n, n);
  for (int l = 1; l <= L; ++l) {
    ws.z[static_cast<size_t>(l)] = Vec::Zero(width);
    ws.T[static_cast<size_t>(l)] = Mat::Zero(width, n);
    ws.J[static_cast<size_t>(l)] = Mat::Zero(width, n);
  }
  ws.g = RowVec::Zero(n);
  ws.zbar = Vec::Zero(width);
  ws.tbar = Vec::Zero(width);
  ws.d = Vec::Zero(width);
  ws.dd = Vec::Zero(width);
  ws.rowdot = Vec::Zero(width);
  ws.jbar = Mat::Zero(width, n);
  ws.tbar_mat = Mat::Zero(width, n);
  ws.gbar_scratch = RowVec::Zero(n);
  return ws;
}

void Mlp::eval(const Vec& w, const Vec& x, MlpWorkspace& ws) const {
  if (w.size() != param_count_) {
    throw ConfigError("parameter vector has size " + std::to_string(w.size()) +
                      ", network expects " + std::to_string(param_count_));
  }
  if (x.size() != config_.input_dim) {
    throw ConfigError("network input has size " + std::to_string(x.size()) +
                      ", expected " + std::to_string(config_.input_dim));
  }
  const int L = config_.hidden_layers;
  const int width = config_.hidden_width;
  ws.z[0] = x;
  for (int l = 1; l <= L; ++l) {
    const size_t li = static_cast<size_t>(l);
    const int in = layer_input_dim(l - 1);
    Eigen::Map<const Mat> W(w.data() + w_off_[li - 1], width, in);
    Eigen::Map<const Vec> b(w.data() + b_off_[li - 1], width);
    ws.z[li].noalias() = W * ws.z[li - 1];
    ws.z[li] += b;
    ws.T[li].noalias() = W * ws.J[li - 1];
    if (config_.activation == Activation::tanh) {
      for (int i = 0; i < width; ++i) ws.z[li](i) = std::tanh(ws.z[li](i));
      ws.d = (1.0 - ws.z[li].array().square()).matrix();
    } else {
      for (int i = 0; i < width; ++i) ws.z[li](i) = stable_sigmoid(ws.z[li](i));
      ws.d = (ws.z[li].array() * (1.0 - ws.z[li].array())).matrix();
    }
    ws.J[li].noalias() = ws.d.asDiagonal() * ws.T[li];
  }
  Eigen::Map<const RowVec> w_out(w.data() + out_w_off_, width);
  ws.v = w_out.dot(ws.z[static_cast<size_t>(L)]) + w(out_b_off_);
  ws.g.noalias() = w_out * ws.J[static_cast<size_t>(L)];
}

void Mlp::adjoint(const Vec& w, MlpWorkspace& ws, double value_bar,
                  const RowVec& grad_bar, Vec& param_grad) const {
  if (param_grad.size() != param_count_) {
    throw ConfigError("gradient accumulator has size " + std::to_string(param_grad.size()) +
                      ", network expects " + std::to_string(param_count_));
  }
  if (grad_bar.size() != config_.input_dim) {
    throw ConfigError("gradient seed has size " + std::to_string(grad_bar.size()) +
                      ", expected " + std::to_string(config_.input_dim));
  }
  const int L = config_.hidden_layers;
  const int width = config_.hidden_width;
  Eigen::Map<const RowVec> w_out(w.data() + out_w_off_, width);

  Eigen::Map<Vec> wbar_out(param_grad.data() + out_w_off_, width);
  wbar_out.noalias() += value_bar * ws.z[static_cast<size_t>(L)];
  wbar_out.noalias() += ws.J[static_cast<size_t>(L)] * grad_bar.transpose();
  param_grad(out_b_off_) += value_bar;

  ws.zbar.noalias() = value_bar * w_out.transpose();
  ws.jbar.noalias() = w_out.transpose() * grad_bar;

  for (int l = L; l >= 1; --l) {
    const size_t li = static_cast<size_t>(l);
    const Vec& z = ws.z[li];
    if (config_.activation == Activation::tanh) {
      ws.d = (1.0 - z.array().square()).matrix();
      ws.dd = (-2.0 * z.array() * ws.d.array()).matrix();
    } else {
      ws.d = (z.array() * (1.0 - z.array())).matrix();
      ws.dd = (ws.d.array() * (1.0 - 2.0 * z.array())).matrix();
    }
    ws.rowdot = (ws.T[li].array() * ws.jbar.array()).rowwise().sum().matrix();
    ws.tbar = ws.d.cwiseProduct(ws.zbar) + ws.dd.cwiseProduct(ws.rowdot);
    ws.tbar_mat.noalias() = ws.d.asDiagonal() * ws.jbar;

    const int in = layer_input_dim(l - 1);
    Eigen::Map<const Mat> W(w.data() + w_off_[li - 1], width, in);
    Eigen::Map<Mat> Wbar(param_grad.data() + w_off_[li - 1], width, in);
    Eigen::Map<Vec> bbar(param_grad.data() + b_off_[li - 1], width);
    Wbar.noalias() += ws.tbar * ws.z[li - 1].transpose();
    Wbar.noalias() += ws.tbar_mat * ws.J[li - 1].transpose();
    bbar += ws.tbar;
    if (l > 1) {
      ws.zbar.noalias() = W.transpose() * ws.tbar;
      ws.jbar.noalias() = W.transpose() * ws.tbar_mat;
    }
  }
}

SurrogateValue::SurrogateValue(MlpConfig config, BarrierCandidate barrier)
    : net_(config), barrier_(std::move(barrier)) {}

SurrogatePoint SurrogateValue::barrier_at(const Vec& x) const {
  SurrogatePoint pt;
  pt.barrier = barrier_.value(x);
  pt.barrier_grad = barrier_.gradient(x);
  return pt;
}

void SurrogateValue::eval(const Vec& w, const Vec& x, const SurrogatePoint& pt,
                          MlpWorkspace& ws, double& value, RowVec& grad_x) const {
  net_.eval(w, x, ws);
  const double h = barrier_.wrapper(ws.v);
  const double hp = barrier_.wrapper_derivative(ws.v);
  value = h * pt.barrier;
  grad_x = (hp * pt.barrier) * ws.g + h * pt.barrier_grad;
}

void SurrogateValue::adjoint(const Vec& w, const SurrogatePoint& pt, MlpWorkspace& ws,
                             double value_bar, const RowVec& grad_bar,
                             Vec& param_grad) const {
  const double hp = barrier_.wrapper_derivative(ws.v);
  const double hpp = barrier_.wrapper_second(ws.v);
  const double g_dot = grad_bar.dot(ws.g);
  const double b_dot = grad_bar.dot(pt.barrier_grad);
  const double vbar = value_bar * hp * pt.barrier + g_dot * hpp * pt.barrier + b_dot * hp;
  ws.gbar_scratch = (hp * pt.barrier) * grad_bar;
  net_.adjoint(w, ws, vbar, ws.gbar_scratch, param_grad);
}

double SurrogateValue::value(const Vec& w, const Vec& x) const {
  MlpWorkspace ws = make_workspace();
  SurrogatePoint pt = barrier_at(x);
  double value = 0.0;
  RowVec grad;
  eval(w, x, pt, ws, value, grad);
  return value;
}

RowVec SurrogateValue::gradient(const Vec& w, const Vec& x) const {
  MlpWorkspace ws = make_workspace();
  SurrogatePoint pt = barrier_at(x);
  double value = 0.0;
  RowVec grad;
  eval(w, x, pt, ws, value, grad);
  return grad;
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open checkpoint file for writing: " + path);
  out << "surrogate-checkpoint v1\n";
  out << "input_dim " << ck.config.input_dim << "\n";
  out << "hidden_layers " << ck.config.hidden_layers << "\n";
  out << "hidden_width " << ck.config.hidden_width << "\n";
  out << "activation " << activation_to_string(ck.config.activation) << "\n";
  out << "wrapper " << ck.wrapper_id << "\n";
  out << "barrier " << ck.barrier_id << "\n";
  out << "seed " << ck.seed << "\n";
  out << "outer_iter " << ck.outer_iter << "\n";
  out << "param_count " << ck.params.size() << "\n";
  for (Eigen::Index i = 0; i < ck.params.size(); ++i) {
    out << fmt17(ck.params(i)) << "\n";
  }
  if (!out) throw ConfigError("failed while writing checkpoint file: " + path);
}

namespace {

std::string expect_field(std::istream& in, const std::string& key,
                         const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("checkpoint file " + path + " ended before field '" + key + "'");
  }
  const std::string prefix = key + " ";
  if (line.rfind(prefix, 0) != 0) {
    throw ConfigError("checkpoint file " + path + ": expected field '" + key +
                      "', got line '" + line + "'");
  }
  return line.substr(prefix.size());
}

int parse_int_field(const std::string& text, const std::string& key,
                    const std::string& path) {
  try {
    size_t pos = 0;
    int value = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw ConfigError("checkpoint file " + path + ": field '" + key +
                      "' is not an integer: '" + text + "'");
  }
}

}  // namespace

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "surrogate-checkpoint v1") {
    throw ConfigError("file " + path + " is not a v1 surrogate checkpoint");
  }
  Checkpoint ck;
  ck.config.input_dim = parse_int_field(expect_field(in, "input_dim", path), "input_dim", path);
  ck.config.hidden_layers =
      parse_int_field(expect_field(in, "hidden_layers", path), "hidden_layers", path);
  ck.config.hidden_width =
      parse_int_field(expect_field(in, "hidden_width", path), "hidden_width", path);
  ck.config.activation = activation_from_string(expect_field(in, "activation", path));
  ck.wrapper_id = expect_field(in, "wrapper", path);
  ck.barrier_id = expect_field(in, "barrier", path);
  try {
    ck.seed = std::stoull(expect_field(in, "seed", path));
  } catch (const std::exception&) {
    throw ConfigError("checkpoint file " + path + ": field 'seed' is not an integer");
  }
  ck.outer_iter = parse_int_field(expect_field(in, "outer_iter", path), "outer_iter", path);
  const int count = parse_int_field(expect_field(in, "param_count", path), "param_count", path);

  const Mlp net(ck.config);
  if (count != net.param_count()) {
    throw ConfigError("checkpoint file " + path + ": header lists " + std::to_string(count) +
                      " parameters but the declared architecture has " +
                      std::to_string(net.param_count()));
  }
  ck.params = Vec::Zero(count);
  for (int i = 0; i < count; ++i) {
    if (!std::getline(in, line)) {
      throw ConfigError("checkpoint file " + path + " ended after " + std::to_string(i) +
                        " of " + std::to_string(count) + " parameters");
    }
    const char* begin = line.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
      throw ConfigError("checkpoint file " + path + ": parameter line " + std::to_string(i) +
                        " is not a number: '" + line + "'");
    }
    ck.params(i) = value;
  }
  while (std::getline(in, line)) {
    if (!line.empty()) {
      throw ConfigError("checkpoint file " + path + ": unexpected trailing data: '" + line + "'");
    }
  }
  return ck;
}

}  // namespace ptsafe
