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

#include <optional>
#include <vector>

#include "octrl/integrate/integrator.hpp"
#include "octrl/nloc/solver.hpp"

namespace octrl {

enum class HorizonMode {
  kReceding,      // constant horizon T
  kFixedEndTime,  // shrinking horizon towards t0 + T, floored at min_horizon
};

struct MpcSettings {
  HorizonMode horizon_mode = HorizonMode::kReceding;
  double min_horizon = 0.1;
  double delay_estimate = 0.0;    // seconds between measurement and actuation
  int iterations_per_step = 1;    // 1 = real-time iteration
  bool warm_start = true;

  void validate() const;
};

struct MpcStepStats {
  int step = 0;
  double t = 0.0;
  double cost = 0.0;
  double defect = 0.0;
  double solve_ms = 0.0;
  double alpha = 0.0;      // step size of the last accepted iteration, 0 if none
  int iterations = 0;      // accepted iterations in this step
  bool degraded = false;   // solver failed; the previous policy was returned
};

/// Receding-horizon wrapper around NLOCSolver: warm starts, delay pre-integration and horizon
/// handling. One instance serves one caller.
class Mpc {
 public:
  /// `problem` defines the dynamics, cost, initial horizon T and start time t0.
  Mpc(OptConProblem problem, NLOCSettings solver_settings, MpcSettings settings);

  /// Full solve (solver_settings.max_iterations) from x0 at time t0.
  const NLOCSolution& initialize(const StateVector& x0, double t0, const InitialGuess& guess = {});
  bool initialized() const { return last_.has_value(); }

  /// Computes the policy to apply from t_now + delay_estimate. On a solver error the previous policy
  /// is returned and the step is flagged degraded.
  StateFeedbackController step(const StateVector& x_measured, double t_now);

  const NLOCSolution& last_solution() const;
  const MpcStepStats& last_stats() const { return stats_; }
  int step_count() const { return step_count_; }
  /// Horizon that step() would use at time t.
  double horizon_at(double t) const;
  const MpcSettings& settings() const { return settings_; }
  const NLOCSettings& solver_settings() const { return solver_settings_; }
  const OptConProblem& problem() const { return problem_; }

 private:
  StateVector predict(const StateVector& x, double t_now) const;
  InitialGuess shifted_guess(double t_start, double horizon, const StateVector& x_start) const;

  OptConProblem problem_;
  NLOCSettings solver_settings_;
  MpcSettings settings_;
  NLOCSolver solver_;
  double t_end_;
  std::optional<NLOCSolution> last_;
  std::optional<StateFeedbackController> policy_;
  MpcStepStats stats_;
  int step_count_ = 0;
};

struct ClosedLoopResult {
  StateTrajectory states;
  ControlTrajectory controls;
  std::vector<MpcStepStats> stats;
};

/// Virtual-time closed loop: every control_dt the MPC is stepped at the measured state, its policy is
/// sampled once and held while the plant is integrated with RK4 (steps of at most plant.dt), then
/// disturbance[k] is added to the state. `disturbance` is empty or has one entry per step.
ClosedLoopResult run_closed_loop(Mpc& mpc, const ControlledSystem& plant, const StateVector& x0, double t0,
                                 double t_end, double control_dt, const std::vector<Vector>& disturbance = {},
                                 const IntegratorSettings& plant_settings = {});

/// Number of control steps run_closed_loop takes on [t0, t_end].
long closed_loop_steps(double t0, double t_end, double control_dt);

}  // namespace octrl
