// Copyright 2026 The octrl Authors
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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "octrl/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"octrl: optimal control, MPC and LQR from INI problem files"};
  app.require_subcommand(1);

  std::string config;
  octrl::cli::CommandOptions opts;

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"solve", "solve the optimal control problem; writes trajectory.csv, gains.csv, iterations.csv"},
      {"mpc-sim", "closed-loop MPC simulation; writes closed_loop.csv, mpc_stats.csv"},
      {"lqr", "solve the algebraic Riccati equation from the [lqr] section"},
      {"integrate", "open-loop integration from the [integrator] section; writes trajectory.csv"},
  };
  for (const auto& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    cmd->add_option("config", config, "problem file (INI)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--workers", opts.workers, "worker threads (default: $OCTRL_WORKERS, else 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", opts.out_dir, "output directory (default: [output] directory)");
    cmd->add_flag("--verbose,-v", opts.verbose, "log more per iteration / step");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : octrl::cli::kExitFault;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return octrl::cli::run_command(command, config, opts, std::cout, std::cerr);
}
