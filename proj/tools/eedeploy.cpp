// Copyright 2026 The eedeploy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// eedeploy: evaluate, optimize, sweep and simulate uplink energy efficiency.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eedeploy/commands.hpp"
#include "eedeploy/config.hpp"
#include "eedeploy/error.hpp"

namespace {

using namespace eedeploy;

struct Flags {
  std::string config;
  std::optional<double> gamma;
  std::optional<std::uint64_t> seed;
  cli::CommandOptions options;
};

RunConfig load(const Flags& f) {
  RunConfig c = f.config.empty() ? parse_config_text("") : load_config(f.config);
  if (f.gamma) {
    c.gamma = *f.gamma;
    c.gamma_grid = {*f.gamma};
    c.explicit_keys.insert("scenario.gamma");
  }
  if (f.seed) {
    c.seed = *f.seed;
    c.explicit_keys.insert("simulation.seed");
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy efficiency of massive-MIMO uplink cellular networks"};
  app.require_subcommand(1);
  app.footer(std::string("Exit codes: 0 ok, 1 usage/config error, 2 infeasible, 3 simulation check failed, "
                         "4 simulation inconclusive.\nEnvironment: ") +
             thread_env_var + " overrides the worker count.");
  Flags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "configuration file (sectioned key = value)");
    sub->add_option("--gamma", flags.gamma, "SINR target; replaces gamma and gamma_grid");
    sub->add_option("--out", flags.options.out, "CSV output path");
  };
  auto* evaluate = app.add_subcommand("evaluate", "evaluate one operating point");
  auto* optimize = app.add_subcommand("optimize", "optimize (M, K, beta), or (M, K, lambda, rho) when mu is set");
  auto* sweep = app.add_subcommand("sweep", "sweep lambda, mu or the (M, K) surface to CSV");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo validation of the closed forms");
  auto* defaults = app.add_subcommand("defaults", "print the default configuration");
  for (auto* s : {evaluate, optimize, sweep, simulate}) add_common(s);
  sweep->add_option("--axis", flags.options.axis, "lambda | mu | mk_surface")
      ->check(CLI::IsMember({"lambda", "mu", "mk_surface"}));
  simulate->add_option("--seed", flags.seed, "64-bit seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::exit_usage;
  }

  try {
    if (defaults->parsed()) {
      std::cout << default_config_text();
      return cli::exit_ok;
    }
    const RunConfig c = load(flags);
    if (evaluate->parsed()) return cli::cmd_evaluate(c, flags.options, std::cout);
    if (optimize->parsed()) return cli::cmd_optimize(c, flags.options, std::cout);
    if (sweep->parsed()) return cli::cmd_sweep(c, flags.options, std::cout, std::cerr);
    if (simulate->parsed()) return cli::cmd_simulate(c, flags.options, std::cout);
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_usage;
  } catch (const parameter_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_usage;
  } catch (const infeasible_error& e) {
    std::cerr << e.what() << "\n";
    return cli::exit_infeasible;
  } catch (const degenerate_model_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_infeasible;
  }
  return cli::exit_usage;
}
