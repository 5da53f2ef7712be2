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

#include "ptsafe/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ptsafe/barrier_value.hpp"

namespace ptsafe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string>& allowed_fields() {
  static const std::set<std::string> fields = {
      "example",        "gamma1",          "gamma2",
      "predefined_time", "hidden_layers",  "hidden_width",
      "activation",     "wrapper",         "collocation_points",
      "collocation_margin", "mu0",         "growth",
      "outer_iterations", "inner_memory",  "inner_max_iterations",
      "inner_tolerance", "frozen_indicator", "sim_step",
      "sim_horizon",    "stop_norm",       "boundary_guard",
      "eval_grid",      "eval_margin",     "seed",
      "output_dir"};
  return fields;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string iso_utc_now() {
  const std::time_t tt = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

void write_manifest(const fs::path& dir, const std::vector<std::string>& files) {
  std::ofstream out(dir / "manifest.txt", std::ios::binary);
  if (!out) throw ConfigError("cannot write manifest in " + dir.string());
  for (const auto& f : files) out << f << "\n";
}

void write_metadata(const fs::path& dir, const json& meta) {
  std::ofstream out(dir / "metadata.json", std::ios::binary);
  if (!out) throw ConfigError("cannot write metadata in " + dir.string());
  out << meta.dump(2) << "\n";
}

std::string fmt_state(const Vec& x) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x(i));
    s += buf;
    if (i + 1 < x.size()) s += ", ";
  }
  return s + ")";
}

/// Validates that a loaded checkpoint matches the architecture the config
/// describes; errors name the first mismatching field.
void check_checkpoint_matches(const Checkpoint& ck, const ExperimentConfig& cfg,
                              const BenchmarkProblem& prob) {
  const MlpConfig net = net_from_config(cfg);
  auto mismatch = [](const std::string& field, const std::string& have,
                     const std::string& want) -> ConfigError {
    return ConfigError("checkpoint does not match the config: " + field + " is " + have +
                       ", config requires " + want);
  };
  if (ck.config.input_dim != net.input_dim) {
    throw mismatch("input_dim", std::to_string(ck.config.input_dim),
                   std::to_string(net.input_dim));
  }
  if (ck.config.hidden_layers != net.hidden_layers) {
    throw mismatch("hidden_layers", std::to_string(ck.config.hidden_layers),
                   std::to_string(net.hidden_layers));
  }
  if (ck.config.hidden_width != net.hidden_width) {
    throw mismatch("hidden_width", std::to_string(ck.config.hidden_width),
                   std::to_string(net.hidden_width));
  }
  if (ck.config.activation != net.activation) {
    throw mismatch("activation", activation_to_string(ck.config.activation),
                   activation_to_string(net.activation));
  }
  if (ck.wrapper_id != cfg.wrapper) throw mismatch("wrapper", ck.wrapper_id, cfg.wrapper);
  if (ck.barrier_id != prob.barrier.id) throw mismatch("barrier", ck.barrier_id, prob.barrier.id);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::string& origin) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + origin + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config " + origin + " must be a JSON object");

  for (const auto& item : j.items()) {
    if (allowed_fields().find(item.key()) == allowed_fields().end()) {
      throw ConfigError("unknown config field '" + item.key() + "' in " + origin);
    }
  }
  for (const auto& name : allowed_fields()) {
    if (!j.contains(name)) {
      throw ConfigError("missing config field '" + name + "' in " + origin);
    }
  }

  auto get_string = [&](const char* key) -> std::string {
    if (!j.at(key).is_string()) {
      throw ConfigError("config field '" + std::string(key) + "' must be a string");
    }
    return j.at(key).get<std::string>();
  };
  auto get_double = [&](const char* key) -> double {
    if (!j.at(key).is_number()) {
      throw ConfigError("config field '" + std::string(key) + "' must be a number");
    }
    return j.at(key).get<double>();
  };
  auto get_int = [&](const char* key) -> int {
    if (!j.at(key).is_number_integer()) {
      throw ConfigError("config field '" + std::string(key) + "' must be an integer");
    }
    return j.at(key).get<int>();
  };
  auto get_bool = [&](const char* key) -> bool {
    if (!j.at(key).is_boolean()) {
      throw ConfigError("config field '" + std::string(key) + "' must be a boolean");
    }
    return j.at(key).get<bool>();
  };
  auto get_seed = [&](const char* key) -> std::uint64_t {
    const auto& v = j.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<long long>() < 0)) {
      throw ConfigError("config field '" + std::string(key) +
                        "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  };

  ExperimentConfig cfg;
  cfg.example = get_string("example");
  cfg.gamma1 = get_double("gamma1");
  cfg.gamma2 = get_double("gamma2");
  cfg.predefined_time = get_double("predefined_time");
  cfg.hidden_layers = get_int("hidden_layers");
  cfg.hidden_width = get_int("hidden_width");
  cfg.activation = get_string("activation");
  cfg.wrapper = get_string("wrapper");
  cfg.collocation_points = get_int("collocation_points");
  cfg.collocation_margin = get_double("collocation_margin");
  cfg.mu0 = get_double("mu0");
  cfg.growth = get_double("growth");
  cfg.outer_iterations = get_int("outer_iterations");
  cfg.inner_memory = get_int("inner_memory");
  cfg.inner_max_iterations = get_int("inner_max_iterations");
  cfg.inner_tolerance = get_double("inner_tolerance");
  cfg.frozen_indicator = get_bool("frozen_indicator");
  cfg.sim_step = get_double("sim_step");
  cfg.sim_horizon = get_double("sim_horizon");
  cfg.stop_norm = get_double("stop_norm");
  cfg.boundary_guard = get_double("boundary_guard");
  cfg.eval_grid = get_int("eval_grid");
  cfg.eval_margin = get_double("eval_margin");
  cfg.seed = get_seed("seed");
  cfg.output_dir = get_string("output_dir");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  return parse_config(read_file(path), path);
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.example == "custom") {
    throw ConfigError(
        "example 'custom' requires programmatic construction; the command-line tool "
        "supports \"bounded\" and \"unbounded\"");
  }
  if (cfg.example != "bounded" && cfg.example != "unbounded") {
    throw ConfigError("config field 'example' must be \"bounded\" or \"unbounded\", got '" +
                      cfg.example + "'");
  }
  if (!(cfg.gamma1 > 0.0 && cfg.gamma1 < 1.0)) {
    throw ConfigError("config field 'gamma1' = " + fmt17(cfg.gamma1) +
                      " violates 0 < gamma1 < 1 (required so that p*r < 1)");
  }
  if (!(cfg.gamma2 > 1.0)) {
    throw ConfigError("config field 'gamma2' = " + fmt17(cfg.gamma2) +
                      " violates gamma2 > 1 (required so that q*r > 1)");
  }
  if (!(cfg.predefined_time > 0.0)) {
    throw ConfigError("config field 'predefined_time' must be positive");
  }
  if (cfg.hidden_layers < 1) throw ConfigError("config field 'hidden_layers' must be at least 1");
  if (cfg.hidden_width < 1) throw ConfigError("config field 'hidden_width' must be at least 1");
  activation_from_string(cfg.activation);
  if (cfg.wrapper != "exp" && cfg.wrapper != "sigmoid") {
    throw ConfigError("config field 'wrapper' must be \"exp\" or \"sigmoid\", got '" +
                      cfg.wrapper + "'");
  }
  if (cfg.collocation_points < 1) {
    throw ConfigError("config field 'collocation_points' must be at least 1");
  }
  if (!(cfg.collocation_margin >= 0.0)) {
    throw ConfigError("config field 'collocation_margin' must be non-negative");
  }
  if (!(cfg.mu0 > 0.0)) throw ConfigError("config field 'mu0' must be positive");
  if (!(cfg.growth > 1.0)) throw ConfigError("config field 'growth' must exceed 1");
  if (cfg.outer_iterations < 0) {
    throw ConfigError("config field 'outer_iterations' must be non-negative");
  }
  if (cfg.inner_memory < 1) throw ConfigError("config field 'inner_memory' must be at least 1");
  if (cfg.inner_max_iterations < 0) {
    throw ConfigError("config field 'inner_max_iterations' must be non-negative");
  }
  if (!(cfg.inner_tolerance > 0.0)) {
    throw ConfigError("config field 'inner_tolerance' must be positive");
  }
  if (!(cfg.sim_step > 0.0)) throw ConfigError("config field 'sim_step' must be positive");
  if (!(cfg.sim_horizon > 0.0)) throw ConfigError("config field 'sim_horizon' must be positive");
  if (!(cfg.stop_norm >= 0.0)) throw ConfigError("config field 'stop_norm' must be non-negative");
  if (!(cfg.boundary_guard >= 0.0)) {
    throw ConfigError("config field 'boundary_guard' must be non-negative");
  }
  if (cfg.eval_grid < 2) throw ConfigError("config field 'eval_grid' must be at least 2");
  if (!(cfg.eval_margin >= 0.0)) {
    throw ConfigError("config field 'eval_margin' must be non-negative");
  }
  if (cfg.output_dir.empty()) throw ConfigError("config field 'output_dir' must not be empty");
}

BenchmarkProblem problem_from_config(const ExperimentConfig& cfg) {
  BenchmarkProblem prob = make_problem(cfg.example, cfg.gamma1, cfg.gamma2);
  if (prob.barrier.wrapper_id != cfg.wrapper) {
    prob.barrier = make_barrier(prob.barrier.id, cfg.wrapper);
  }
  return prob;
}

PredefinedTimeParams ptp_from_config(const ExperimentConfig& cfg) {
  return make_predefined_time_params(cfg.gamma1, cfg.gamma2, cfg.predefined_time);
}

MlpConfig net_from_config(const ExperimentConfig& cfg) {
  MlpConfig net;
  net.input_dim = 2;
  net.hidden_layers = cfg.hidden_layers;
  net.hidden_width = cfg.hidden_width;
  net.activation = activation_from_string(cfg.activation);
  return net;
}

TrainConfig train_config_from_config(const ExperimentConfig& cfg) {
  TrainConfig tc;
  tc.collocation_points = cfg.collocation_points;
  tc.collocation_margin = cfg.collocation_margin;
  tc.mu0 = cfg.mu0;
  tc.growth = cfg.growth;
  tc.outer_iterations = cfg.outer_iterations;
  tc.inner.memory = cfg.inner_memory;
  tc.inner.max_iterations = cfg.inner_max_iterations;
  tc.inner.gradient_tolerance = cfg.inner_tolerance;
  tc.frozen_indicator = cfg.frozen_indicator;
  tc.seed = cfg.seed;
  return tc;
}

SimConfig sim_config_from_config(const ExperimentConfig& cfg) {
  SimConfig sc;
  sc.step = cfg.sim_step;
  sc.horizon = cfg.sim_horizon;
  sc.stop_norm = cfg.stop_norm;
  sc.boundary_guard = cfg.boundary_guard;
  return sc;
}

namespace {

std::string training_report_text(const ExperimentConfig& cfg, const PredefinedTimeParams& ptp,
                                 const std::vector<TrainReportRow>& rows) {
  std::ostringstream out;
  const BenchmarkProblem prob = problem_from_config(cfg);
  out << "# training report\n";
  out << "# example " << cfg.example << "\n";
  out << "# gamma1 " << fmt17(cfg.gamma1) << "\n";
  out << "# gamma2 " << fmt17(cfg.gamma2) << "\n";
  out << "# predefined_time " << fmt17(cfg.predefined_time) << "\n";
  out << "# rate_constant_gamma " << fmt17(ptp.gamma)
      << " (formula value; differs from predefined_time only by configuration)\n";
  out << "# alpha " << fmt17(ptp.alpha) << "\n";
  out << "# beta " << fmt17(ptp.beta) << "\n";
  out << "# p " << fmt17(ptp.p) << "\n";
  out << "# q " << fmt17(ptp.q) << "\n";
  out << "# r " << fmt17(ptp.r) << "\n";
  out << "# network " << cfg.hidden_layers << "x" << cfg.hidden_width << " " << cfg.activation
      << "\n";
  out << "# wrapper " << cfg.wrapper << "\n";
  out << "# barrier " << prob.barrier.id << "\n";
  out << "# collocation_points " << cfg.collocation_points << "\n";
  out << "# collocation_margin " << fmt17(cfg.collocation_margin) << "\n";
  out << "# sampling uniform over the box, rejected against level >= margin\n";
  out << "# sampling_box";
  for (int i = 0; i < prob.model.dynamics.n; ++i) {
    out << " [" << fmt17(prob.model.safe_set.sampling_box(i, 0)) << ", "
        << fmt17(prob.model.safe_set.sampling_box(i, 1)) << "]";
  }
  out << "\n";
  out << "# mu0 " << fmt17(cfg.mu0) << "\n";
  out << "# growth " << fmt17(cfg.growth) << "\n";
  out << "# outer_iterations " << cfg.outer_iterations << "\n";
  out << "# inner_memory " << cfg.inner_memory << "\n";
  out << "# inner_max_iterations " << cfg.inner_max_iterations << "\n";
  out << "# inner_tolerance " << fmt17(cfg.inner_tolerance) << "\n";
  out << "# frozen_indicator " << (cfg.frozen_indicator ? "true" : "false") << "\n";
  out << "# seed " << cfg.seed << "\n";
  out << "outer_iter\tE\tmax_l\tviolated_fraction\tinner_iters\thji_loss\tmu\tlambda_max\n";
  for (const auto& row : rows) {
    out << row.outer_iter << "\t" << fmt17(row.augmented) << "\t" << fmt17(row.constraint_max)
        << "\t" << fmt17(row.violated_fraction) << "\t" << row.inner_iterations << "\t"
        << fmt17(row.hji_loss) << "\t" << fmt17(row.mu) << "\t" << fmt17(row.lambda_max) << "\n";
  }
  return out.str();
}

}  // namespace

void write_training_report(const std::string& path, const ExperimentConfig& cfg,
                           const PredefinedTimeParams& ptp,
                           const std::vector<TrainReportRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open report file for writing: " + path);
  out << training_report_text(cfg, ptp, rows);
  if (!out) throw ConfigError("failed while writing report file: " + path);
}

std::vector<Vec> load_initial_states(const std::string& path, int n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open initial-states file: " + path);
  std::vector<Vec> states;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> vals;
    double v;
    while (ls >> v) vals.push_back(v);
    if (!ls.eof()) {
      throw ConfigError("initial-states file " + path + " line " + std::to_string(lineno) +
                        " contains a non-numeric token");
    }
    if (vals.empty()) continue;
    if (static_cast<int>(vals.size()) != n) {
      throw ConfigError("initial-states file " + path + " line " + std::to_string(lineno) +
                        " has " + std::to_string(vals.size()) + " values, expected " +
                        std::to_string(n));
    }
    Vec x(n);
    for (int i = 0; i < n; ++i) x(i) = vals[static_cast<size_t>(i)];
    states.push_back(x);
  }
  if (states.empty()) {
    throw ConfigError("initial-states file " + path + " contains no states");
  }
  return states;
}

int cmd_gamma(double alpha, double beta, double p, double q, double r, std::ostream& out) {
  try {
    const double g = gamma_constant(alpha, beta, p, q, r);
    out << "gamma = " << fmt17(g) << "\n";
    out << "implied_predefined_time = " << fmt17(g) << "\n";
    return kExitOk;
  } catch (const DomainError& e) {
    out << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

int cmd_verify_exact(const ExperimentConfig& cfg, const VerifySettings& settings,
                     std::ostream& out) {
  const BenchmarkProblem prob = problem_from_config(cfg);
  const PredefinedTimeParams ptp = ptp_from_config(cfg);
  const GameModel& model = prob.model;
  const RunningCost& cost = prob.cost;

  out << "verify-exact: example " << cfg.example << ", points " << settings.points
      << ", margin " << fmt17(settings.margin) << ", seed " << settings.seed << "\n";

  const Mat pts = sample_collocation(model, settings.points, settings.margin, settings.seed);
  const StrategyPair nash = strategy_pair_from_gradient(model, cost, prob.exact.gradient);
  std::mt19937_64 gen(settings.seed + 1);

  bool all_pass = true;
  auto report = [&](bool pass, const std::string& line) {
    out << (pass ? "PASS " : "FAIL ") << line << "\n";
    if (!pass) all_pass = false;
  };

  // Steady-state equation residual with the exact value.
  double worst_res = 0.0;
  Vec worst_res_x = pts.col(0);
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    const Vec x = pts.col(j);
    const double r_abs =
        std::abs(hji_residual(model, cost, prob.exact.value, prob.exact.gradient, x));
    if (r_abs > worst_res) {
      worst_res = r_abs;
      worst_res_x = x;
    }
  }
  report(worst_res <= 1e-8, "equation_residual: max |residual| = " + fmt17(worst_res) +
                                " at x = " + fmt_state(worst_res_x));

  // Saddle ordering and exact quadratic gap identities.
  double worst_adv_gap = -std::numeric_limits<double>::infinity();
  double worst_ctrl_gap = std::numeric_limits<double>::infinity();
  double worst_identity = 0.0;
  Vec worst_saddle_x = pts.col(0);
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    const Vec x = pts.col(j);
    Vec u(model.dynamics.m_u), a(model.dynamics.m_a);
    for (int i = 0; i < model.dynamics.m_u; ++i) {
      u(i) = settings.input_box * (2.0 * uniform01(gen) - 1.0);
    }
    for (int i = 0; i < model.dynamics.m_a; ++i) {
      a(i) = settings.input_box * (2.0 * uniform01(gen) - 1.0);
    }
    const auto gaps = saddle_gap(model, cost, prob.exact.gradient, x, u, a);
    const Vec us = nash.control(x);
    const Vec as = nash.adversary(x);
    const double quad_a = (a - as).dot(cost.adversary_weight(x) * (a - as));
    const double quad_u = (u - us).dot(cost.control_weight(x) * (u - us));
    const double dev =
        std::max(std::abs(gaps.first + quad_a), std::abs(gaps.second - quad_u));
    if (gaps.first > worst_adv_gap) worst_adv_gap = gaps.first;
    if (gaps.second < worst_ctrl_gap) worst_ctrl_gap = gaps.second;
    if (dev > worst_identity) {
      worst_identity = dev;
      worst_saddle_x = x;
    }
  }
  report(worst_adv_gap <= 1e-9 && worst_ctrl_gap >= -1e-9,
         "saddle_ordering: max adversary gap = " + fmt17(worst_adv_gap) +
             ", min control gap = " + fmt17(worst_ctrl_gap));
  report(worst_identity <= 1e-10, "saddle_gap_identity: max deviation = " +
                                      fmt17(worst_identity) + " at x = " +
                                      fmt_state(worst_saddle_x));

  // Predefined-time decrease margin with the exact value.
  double worst_margin = -std::numeric_limits<double>::infinity();
  Vec worst_margin_x = pts.col(0);
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    const Vec x = pts.col(j);
    const double m =
        lyapunov_decrease_margin(model, cost, prob.exact.value, prob.exact.gradient, ptp, x);
    if (m > worst_margin) {
      worst_margin = m;
      worst_margin_x = x;
    }
  }
  report(worst_margin <= 1e-10, "decrease_margin: max margin = " + fmt17(worst_margin) +
                                    " at x = " + fmt_state(worst_margin_x));

  // Closed-form strategies agree with the gradient-derived equilibrium.
  double worst_agree = 0.0;
  Vec worst_agree_x = pts.col(0);
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    const Vec x = pts.col(j);
    const double dev = std::max(
        (nash.control(x) - prob.closed_form.control(x)).lpNorm<Eigen::Infinity>(),
        (nash.adversary(x) - prob.closed_form.adversary(x)).lpNorm<Eigen::Infinity>());
    if (dev > worst_agree) {
      worst_agree = dev;
      worst_agree_x = x;
    }
  }
  report(worst_agree <= 1e-10, "strategy_agreement: max deviation = " + fmt17(worst_agree) +
                                   " at x = " + fmt_state(worst_agree_x));

  out << (all_pass ? "verification passed" : "verification FAILED") << "\n";
  return all_pass ? kExitOk : kExitVerification;
}

int cmd_train(const ExperimentConfig& cfg, std::ostream& out) {
  const BenchmarkProblem prob = problem_from_config(cfg);
  const PredefinedTimeParams ptp = ptp_from_config(cfg);
  const MlpConfig net = net_from_config(cfg);
  const TrainConfig tc = train_config_from_config(cfg);

  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);

  const std::string started = iso_utc_now();
  const auto clock_start = std::chrono::steady_clock::now();
  auto last_mark = clock_start;

  Trainer trainer(prob, ptp, net, tc);
  std::vector<std::string> files;
  std::vector<double> outer_seconds;

  auto save = [&](int k, const Vec& w, const std::string& name) {
    Checkpoint ck;
    ck.config = net;
    ck.wrapper_id = cfg.wrapper;
    ck.barrier_id = prob.barrier.id;
    ck.seed = cfg.seed;
    ck.outer_iter = k;
    ck.params = w;
    save_checkpoint((dir / name).string(), ck);
    files.push_back(name);
  };

  auto on_outer = [&](int k, const Vec& w) {
    char name[40];
    std::snprintf(name, sizeof(name), "checkpoint_%03d.txt", k);
    save(k, w, name);
    const auto now = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(now - last_mark).count();
    last_mark = now;
    outer_seconds.push_back(secs);
    out << "outer " << k << " done (" << fmt17(secs) << " s), wrote " << name << std::endl;
  };

  TrainResult res = trainer.run(on_outer);

  save(res.multipliers.outer_iter, res.w, "checkpoint_final.txt");
  write_training_report((dir / "report.txt").string(), cfg, ptp, res.rows);
  files.push_back("report.txt");

  const double total_secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
  json meta;
  meta["command"] = "train";
  meta["started_at"] = started;
  meta["finished_at"] = iso_utc_now();
  meta["wall_seconds"] = total_secs;
  meta["outer_wall_seconds"] = outer_seconds;
  meta["failed"] = res.failed;
  if (res.failed) meta["error"] = res.error;
  write_metadata(dir, meta);
  files.push_back("metadata.json");
  write_manifest(dir, files);

  out << training_report_text(cfg, ptp, res.rows);
  if (res.failed) {
    out << "training failed: " << res.error << "\n";
    return kExitNumeric;
  }
  out << "training complete in " << fmt17(total_secs) << " s\n";
  return kExitOk;
}

namespace {

/// Builds the feedback pair to simulate: the closed-form equilibrium for
/// "exact", otherwise the equilibrium induced by a trained surrogate.
StrategyPair strategies_from_checkpoint(const ExperimentConfig& cfg,
                                        const BenchmarkProblem& prob,
                                        const std::string& checkpoint) {
  if (checkpoint == "exact") return prob.closed_form;
  Checkpoint ck = load_checkpoint(checkpoint);
  check_checkpoint_matches(ck, cfg, prob);
  auto surrogate = std::make_shared<SurrogateValue>(net_from_config(cfg), prob.barrier);
  auto params = std::make_shared<Vec>(std::move(ck.params));
  auto gradient = [surrogate, params](const Vec& x) -> RowVec {
    return surrogate->gradient(*params, x);
  };
  return strategy_pair_from_gradient(prob.model, prob.cost, gradient);
}

}  // namespace

int cmd_simulate(const ExperimentConfig& cfg, const std::string& checkpoint,
                 const std::string& x0_path, std::ostream& out) {
  const BenchmarkProblem prob = problem_from_config(cfg);
  const SimConfig sc = sim_config_from_config(cfg);
  const StrategyPair strat = strategies_from_checkpoint(cfg, prob, checkpoint);
  const std::vector<Vec> x0s = load_initial_states(x0_path, prob.model.dynamics.n);

  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  const std::string started = iso_utc_now();
  const auto clock_start = std::chrono::steady_clock::now();

  std::vector<std::string> files;
  std::ostringstream summary;
  summary << "trajectory,status,settled_at,min_safety_level,J\n";
  int complete_count = 0;
  for (size_t i = 0; i < x0s.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "traj_%03zu.csv", i);
    const Trajectory traj = integrate(prob.model, prob.cost, strat, x0s[i], sc);
    write_trajectory_csv((dir / name).string(), traj);
    files.push_back(name);

    summary << name << "," << sim_status_to_string(traj.status) << ",";
    if (traj.settled_at.has_value()) summary << fmt17(*traj.settled_at);
    summary << "," << fmt17(traj.min_safety_level) << ",";
    if (traj.status == SimStatus::complete) {
      summary << fmt17(accumulate_cost(traj));
      ++complete_count;
    }
    summary << "\n";
    if (traj.status != SimStatus::complete) {
      out << name << ": " << sim_status_to_string(traj.status) << " (" << traj.message << ")\n";
    }
  }
  {
    std::ofstream sf(dir / "summary.csv", std::ios::binary);
    if (!sf) throw ConfigError("cannot write summary.csv in " + dir.string());
    sf << summary.str();
  }
  files.push_back("summary.csv");

  json meta;
  meta["command"] = "simulate";
  meta["checkpoint"] = checkpoint;
  meta["started_at"] = started;
  meta["finished_at"] = iso_utc_now();
  meta["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
  write_metadata(dir, meta);
  files.push_back("metadata.json");
  write_manifest(dir, files);

  out << "simulated " << x0s.size() << " trajectories, " << complete_count << " complete\n";
  return kExitOk;
}

int cmd_evaluate(const ExperimentConfig& cfg, const std::string& checkpoint, std::ostream& out) {
  const BenchmarkProblem prob = problem_from_config(cfg);
  const Mat grid = evaluation_grid(prob.model, cfg.eval_grid, cfg.eval_margin);

  SurrogateMetrics metrics;
  if (checkpoint == "exact") {
    metrics = evaluate_value_function(prob, prob.exact.value, prob.exact.gradient, grid);
  } else {
    Checkpoint ck = load_checkpoint(checkpoint);
    check_checkpoint_matches(ck, cfg, prob);
    const SurrogateValue surrogate(net_from_config(cfg), prob.barrier);
    metrics = evaluate_surrogate(prob, surrogate, ck.params, grid);
  }

  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  const std::string started = iso_utc_now();

  write_metrics_csv((dir / "metrics.csv").string(), metrics);
  std::vector<std::string> files{"metrics.csv"};

  json meta;
  meta["command"] = "evaluate";
  meta["checkpoint"] = checkpoint;
  meta["started_at"] = started;
  meta["finished_at"] = iso_utc_now();
  write_metadata(dir, meta);
  files.push_back("metadata.json");
  write_manifest(dir, files);

  out << "points " << metrics.points.cols() << "\n";
  out << "median_sae_value = " << fmt17(metrics.median_sae_value) << "\n";
  out << "median_sae_control = " << fmt17(metrics.median_sae_control) << "\n";
  out << "median_sae_adversary = " << fmt17(metrics.median_sae_adversary) << "\n";
  return kExitOk;
}

}  // namespace ptsafe
