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

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ptsafe/experiment.hpp"

namespace {

/// Loads/builds the experiment config for a subcommand, applying the common
/// --out / --seed overrides, and validates it.
ptsafe::ExperimentConfig resolve_config(const std::string& config_path,
                                        const std::string& example,
                                        const std::string& out_override, bool has_seed,
                                        std::uint64_t seed_override) {
  ptsafe::ExperimentConfig cfg;
  if (!config_path.empty()) {
    cfg = ptsafe::load_config(config_path);
  } else {
    cfg.example = example.empty() ? "bounded" : example;
  }
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (has_seed) cfg.seed = seed_override;
  ptsafe::validate_config(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"predefined-time safe zero-sum differential game solver"};
  app.require_subcommand(1);

  // gamma
  double g_alpha = 0, g_beta = 0, g_p = 0, g_q = 0, g_r = 0;
  CLI::App* gamma = app.add_subcommand("gamma", "evaluate the predefined-time rate constant");
  gamma->add_option("--alpha", g_alpha, "rate coefficient alpha > 0")->required();
  gamma->add_option("--beta", g_beta, "rate coefficient beta > 0")->required();
  gamma->add_option("--p", g_p, "low exponent, p r < 1")->required();
  gamma->add_option("--q", g_q, "high exponent, q r > 1")->required();
  gamma->add_option("--r", g_r, "outer exponent r > 0")->required();

  // verify-exact
  std::string v_config, v_example;
  ptsafe::VerifySettings v_settings;
  CLI::App* verify =
      app.add_subcommand("verify-exact", "check the closed-form solution analytically");
  verify->add_option("--config", v_config, "experiment config JSON");
  verify->add_option("--example", v_example, "built-in example: bounded | unbounded");
  verify->add_option("--points", v_settings.points, "number of sampled interior states");
  verify->add_option("--margin", v_settings.margin, "safety-level margin for sampling");
  verify->add_option("--input-box", v_settings.input_box,
                     "u, a sampled uniformly in [-box, box]^m");
  verify->add_option("--seed", v_settings.seed, "sampling seed");

  // train
  std::string t_config, t_out;
  std::uint64_t t_seed = 0;
  CLI::App* train = app.add_subcommand("train", "train the surrogate value function");
  train->add_option("--config", t_config, "experiment config JSON")->required();
  train->add_option("--out", t_out, "output directory (overrides config)");
  CLI::Option* t_seed_opt = train->add_option("--seed", t_seed, "seed (overrides config)");

  // simulate
  std::string s_config, s_checkpoint, s_x0, s_out;
  std::uint64_t s_seed = 0;
  CLI::App* simulate = app.add_subcommand("simulate", "integrate closed-loop trajectories");
  simulate->add_option("--config", s_config, "experiment config JSON")->required();
  simulate->add_option("--checkpoint", s_checkpoint, "checkpoint path, or \"exact\"")
      ->required();
  simulate->add_option("x0-file", s_x0, "initial states, one per line")->required();
  simulate->add_option("--out", s_out, "output directory (overrides config)");
  CLI::Option* s_seed_opt = simulate->add_option("--seed", s_seed, "seed (overrides config)");

  // evaluate
  std::string e_config, e_checkpoint, e_out;
  std::uint64_t e_seed = 0;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "compare a value function against the closed form");
  evaluate->add_option("--config", e_config, "experiment config JSON")->required();
  evaluate->add_option("--checkpoint", e_checkpoint, "checkpoint path, or \"exact\"")
      ->required();
  evaluate->add_option("--out", e_out, "output directory (overrides config)");
  CLI::Option* e_seed_opt = evaluate->add_option("--seed", e_seed, "seed (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ptsafe::kExitOk : ptsafe::kExitValidation;
  }

  try {
    if (gamma->parsed()) {
      return ptsafe::cmd_gamma(g_alpha, g_beta, g_p, g_q, g_r, std::cout);
    }
    if (verify->parsed()) {
      if (!v_config.empty() && !v_example.empty()) {
        throw ptsafe::ConfigError("pass either --config or --example, not both");
      }
      const ptsafe::ExperimentConfig cfg =
          resolve_config(v_config, v_example, "", false, 0);
      return ptsafe::cmd_verify_exact(cfg, v_settings, std::cout);
    }
    if (train->parsed()) {
      const ptsafe::ExperimentConfig cfg =
          resolve_config(t_config, "", t_out, t_seed_opt->count() > 0, t_seed);
      return ptsafe::cmd_train(cfg, std::cout);
    }
    if (simulate->parsed()) {
      const ptsafe::ExperimentConfig cfg =
          resolve_config(s_config, "", s_out, s_seed_opt->count() > 0, s_seed);
      return ptsafe::cmd_simulate(cfg, s_checkpoint, s_x0, std::cout);
    }
    if (evaluate->parsed()) {
      const ptsafe::ExperimentConfig cfg =
          resolve_config(e_config, "", e_out, e_seed_opt->count() > 0, e_seed);
      return ptsafe::cmd_evaluate(cfg, e_checkpoint, std::cout);
    }
  } catch (const ptsafe::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return ptsafe::kExitNumeric;
  } catch (const ptsafe::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ptsafe::kExitValidation;
  } catch (const ptsafe::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ptsafe::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ptsafe::kExitValidation;
  }
  return ptsafe::kExitValidation;
}
