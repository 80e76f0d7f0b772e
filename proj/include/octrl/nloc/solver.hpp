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
#include <string>
#include <vector>

#include "octrl/constraint/constraint.hpp"
#include "octrl/core/controller.hpp"
#include "octrl/core/discrete_trajectory.hpp"
#include "octrl/core/errors.hpp"
#include "octrl/core/system.hpp"
#include "octrl/cost/cost_function.hpp"
#include "octrl/diff/linearizer.hpp"
#include "octrl/diff/sensitivity.hpp"
#include "octrl/lq/gn_riccati_solver.hpp"
#include "octrl/nloc/parallel.hpp"

namespace octrl {

/// Optimal control problem: minimize the cost of `dynamics` from x0 over [t0, t0 + T].
struct OptConProblem {
  ControlledSystem dynamics;
  CostFunction cost;
  std::optional<ConstraintContainer> constraints;
  StateVector x0;
  double T = 1.0;
  double t0 = 0.0;

  void validate() const;
};

enum class Algorithm { kILQR, kGNMS };

struct NLOCSettings {
  Algorithm algorithm = Algorithm::kGNMS;
  int N = 100;
  DiscretizationMethod sensitivity = DiscretizationMethod::kExactIntegrated;
  DerivativeMethod dynamics_derivatives = DerivativeMethod::kAuto;
  CostDerivatives cost_derivatives = CostDerivatives::kAnalytic;
  int substeps = 1;                 // RK4 steps per control interval
  int max_iterations = 100;
  double convergence_tol = 1e-9;    // on merit decrease and on the expected model decrease
  double defect_tol = 1e-9;         // L1 defect norm required for convergence
  std::vector<double> alphas = {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
  double merit_defect_weight = -1.0;  // mu; negative selects 10 (cost + 1) per iteration
  bool armijo = false;              // require merit decrease >= armijo_c * alpha * expected decrease
  double armijo_c = 1e-4;
  int workers = 1;
  std::optional<Vector> u_lb, u_ub;  // control clamp
  double constraint_penalty = 1e3;  // stiffness of the soft constraint terms
  RiccatiSettings riccati;

  void validate() const;
};

struct InitialGuess {
  std::vector<Vector> u;  // N controls, empty for zeros
  std::vector<Vector> x;  // N + 1 shooting nodes (GNMS only), empty for x0 everywhere
};

struct IterationLog {
  int iteration = 0;
  double cost = 0.0;
  double defect_norm = 0.0;
  double merit = 0.0;
  double merit_before = 0.0;  // merit of the previous iterate under the same mu
  double alpha = 0.0;         // 0 for the initial guess and for the final convergence check
  double lambda = 0.0;
  double expected_decrease = 0.0;
};

enum class SolveStatus { kConverged, kMaxIterations, kLineSearchFailed };

const char* to_string(SolveStatus status);

struct NLOCSolution {
  StateTrajectory x_traj;     // N + 1 knots, linear interpolation
  ControlTrajectory u_traj;   // N knots, zero-order hold
  FeedbackTrajectory K;       // N gains, du = K dx
  double cost = 0.0;
  double defect_norm = 0.0;
  SolveStatus status = SolveStatus::kMaxIterations;
  int accepted_iterations = 0;
  std::vector<IterationLog> iterations;
  std::string message;

  bool converged() const { return status == SolveStatus::kConverged; }
  StateFeedbackController policy() const;
};

/// Thrown when a rollout hits a non-finite state; carries the states computed so far.
class RolloutFault : public NumericalFault {
 public:
  RolloutFault(const std::string& what, StateTrajectory partial, double time)
      : NumericalFault(what, -1, time), partial_(std::move(partial)) {}
  const StateTrajectory& partial() const { return partial_; }

 private:
  StateTrajectory partial_;
};

struct RolloutResult {
  StateTrajectory states;
  double cost = 0.0;
};

/// The problem cost plus one penalty term per constraint (stiffness settings.constraint_penalty).
CostFunction effective_cost(const OptConProblem& problem, const NLOCSettings& settings);

/// Single-shooting forward simulation with clamped, zero-order-held controls. Cost is the rectangle
/// rule sum of intermediate costs times dt plus the final cost.
RolloutResult rollout(const OptConProblem& problem, const std::vector<Vector>& u, const StateVector& x_start,
                      const NLOCSettings& settings);

/// Sum over stages of intermediate cost times dt, plus the final cost, evaluated on given nodes.
double trajectory_cost(const CostFunction& cost, const std::vector<Vector>& x, const std::vector<Vector>& u,
                       double t0, double dt);

/// LQ subproblem around (x, u). Stages are processed in parallel; the result does not depend on the
/// worker count. Defects are zero for iLQR and rollout-end minus next node for GNMS.
LQOCProblem lq_approximation(const OptConProblem& problem, const std::vector<Vector>& x,
                             const std::vector<Vector>& u, const NLOCSettings& settings,
                             ParallelExecutor& executor);
LQOCProblem lq_approximation(const OptConProblem& problem, const std::vector<Vector>& x,
                             const std::vector<Vector>& u, const NLOCSettings& settings);

/// cost + mu * defect_norm
double merit(double cost, double defect_norm, double mu);

/// iLQR / GNMS solver with a persistent worker pool.
class NLOCSolver {
 public:
  explicit NLOCSolver(NLOCSettings settings);

  const NLOCSettings& settings() const { return settings_; }
  void set_max_iterations(int n) { settings_.max_iterations = n; }

  NLOCSolution solve(const OptConProblem& problem, const InitialGuess& guess = {});

 private:
  NLOCSettings settings_;
  ParallelExecutor executor_;
};

NLOCSolution solve(const OptConProblem& problem, const NLOCSettings& settings, const InitialGuess& guess = {});

/// u_ff = u_traj, gains = K, x_ref = first N states; zero-order hold between knots.
StateFeedbackController update_policy_from_solution(const NLOCSolution& solution);

}  // namespace octrl
