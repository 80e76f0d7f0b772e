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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "octrl/cli/config.hpp"

namespace octrl::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitSuccess = 0,        // converged / completed
  kExitFault = 1,          // invalid input, numerical fault, line-search failure
  kExitMaxIterations = 2,  // solver stopped at max_iterations
};

struct CommandOptions {
  std::string out_dir;  // overrides [output] directory when non-empty
  int workers = 0;      // 0: config value, then $OCTRL_WORKERS, then 1
  bool verbose = false;
};

/// Writes trajectory.csv, gains.csv and iterations.csv; logs iterations to `log`.
int cmd_solve(const ProblemConfig& cfg, const CommandOptions& opts, std::ostream& log);
/// Writes closed_loop.csv and mpc_stats.csv.
int cmd_mpc_sim(const ProblemConfig& cfg, const CommandOptions& opts, std::ostream& log);
/// Prints P and K of the continuous or discrete algebraic Riccati equation.
int cmd_lqr(const ProblemConfig& cfg, const CommandOptions& opts, std::ostream& log);
/// Writes the open-loop trajectory.csv under a constant input.
int cmd_integrate(const ProblemConfig& cfg, const CommandOptions& opts, std::ostream& log);

/// Parses `config_path` and runs `command`. Every error is reported on `err` and mapped to
/// kExitFault.
int run_command(const std::string& command, const std::string& config_path, const CommandOptions& opts,
                std::ostream& log, std::ostream& err);

void write_gains_csv(std::ostream& out, const FeedbackTrajectory& gains);
void write_iterations_csv(std::ostream& out, const std::vector<IterationLog>& iterations);
void write_mpc_stats_csv(std::ostream& out, const std::vector<MpcStepStats>& stats);

/// One additive state disturbance per control step. Row count or width mismatches raise
/// ValidationError naming mpc.disturbance.
std::vector<Vector> load_disturbance(const std::string& path, int state_dim, long steps);

}  // namespace octrl::cli
