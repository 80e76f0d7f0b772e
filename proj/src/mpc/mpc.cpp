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

#include "octrl/mpc/mpc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace octrl {
namespace {

Vector clamp_to(const Vector& u, const NLOCSettings& s) {
  Vector out = u;
  if (s.u_lb) out = out.cwiseMax(*s.u_lb);
  if (s.u_ub) out = out.cwiseMin(*s.u_ub);
  return out;
}

double last_alpha(const NLOCSolution& sol) {
  for (auto it = sol.iterations.rbegin(); it != sol.iterations.rend(); ++it) {
    if (it->alpha > 0.0) return it->alpha;
  }
  return 0.0;
}

}  // namespace

void MpcSettings::validate() const {
  if (!(min_horizon > 0.0)) throw ConfigurationError("mpc: min_horizon must be > 0");
  if (!(delay_estimate >= 0.0)) throw ConfigurationError("mpc: delay_estimate must be >= 0");
  if (iterations_per_step < 1) throw ConfigurationError("mpc: iterations_per_step must be >= 1");
}

Mpc::Mpc(OptConProblem problem, NLOCSettings solver_settings, MpcSettings settings)
    : problem_(std::move(problem)),
      solver_settings_(std::move(solver_settings)),
      settings_((settings.validate(), settings)),
      solver_(solver_settings_),
      t_end_(problem_.t0 + problem_.T) {
  problem_.validate();
}

double Mpc::horizon_at(double t) const {
  if (settings_.horizon_mode == HorizonMode::kReceding) return problem_.T;
  return std::max(settings_.min_horizon, t_end_ - t);
}

const NLOCSolution& Mpc::last_solution() const {
  if (!last_) throw ConfigurationError("mpc: not initialized");
  return *last_;
}

const NLOCSolution& Mpc::initialize(const StateVector& x0, double t0, const InitialGuess& guess) {
  OptConProblem p = problem_;
  p.x0 = x0;
  p.t0 = t0;
  p.T = horizon_at(t0);
  solver_.set_max_iterations(solver_settings_.max_iterations);
  const auto start = std::chrono::steady_clock::now();
  last_ = solver_.solve(p, guess);
  const auto stop = std::chrono::steady_clock::now();
  policy_ = last_->policy();
  stats_ = MpcStepStats{};
  stats_.t = t0;
  stats_.cost = last_->cost;
  stats_.defect = last_->defect_norm;
  stats_.solve_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  stats_.alpha = last_alpha(*last_);
  stats_.iterations = last_->accepted_iterations;
  return *last_;
}

StateVector Mpc::predict(const StateVector& x, double t_now) const {
  if (settings_.delay_estimate <= 0.0 || !policy_) return x;
  const double h = problem_.T / solver_settings_.N;
  const long steps = fixed_step_count(t_now, t_now + settings_.delay_estimate, h);
  Vector xk = x;
  double t = t_now;
  for (long k = 0; k < steps; ++k) {
    const double t_next = (k + 1 == steps) ? t_now + settings_.delay_estimate : t_now + (k + 1) * h;
    const Vector u = clamp_to(policy_->evaluate(xk, t).u, solver_settings_);
    xk = integrate_interval(problem_.dynamics, xk, u, t, t_next - t, 1);
    t = t_next;
  }
  return xk;
}

InitialGuess Mpc::shifted_guess(double t_start, double horizon, const StateVector& x_start) const {
  InitialGuess guess;
  if (!settings_.warm_start || !last_) return guess;
  const auto N = static_cast<std::size_t>(solver_settings_.N);
  const double dt = horizon / solver_settings_.N;
  guess.u.resize(N);
  guess.x.resize(N + 1);
  for (std::size_t k = 0; k <= N; ++k) {
    const double t = t_start + static_cast<double>(k) * dt;
    guess.x[k] = last_->x_traj.interpolate(t);
    if (k < N) guess.u[k] = last_->u_traj.interpolate(t);
  }
  guess.x[0] = x_start;
  return guess;
}

StateFeedbackController Mpc::step(const StateVector& x_measured, double t_now) {
  if (!last_ || !policy_) throw ConfigurationError("mpc: step() before initialize()");
  ++step_count_;
  stats_ = MpcStepStats{};
  stats_.step = step_count_;
  stats_.t = t_now;
  const auto start = std::chrono::steady_clock::now();
  try {
    const double t_start = t_now + settings_.delay_estimate;
    OptConProblem p = problem_;
    p.x0 = predict(x_measured, t_now);
    p.t0 = t_start;
    p.T = horizon_at(t_start);
    const InitialGuess guess = shifted_guess(t_start, p.T, p.x0);
    solver_.set_max_iterations(settings_.iterations_per_step);
    NLOCSolution sol = solver_.solve(p, guess);
    policy_ = sol.policy();
    last_ = std::move(sol);
    stats_.cost = last_->cost;
    stats_.defect = last_->defect_norm;
    stats_.alpha = last_alpha(*last_);
    stats_.iterations = last_->accepted_iterations;
  } catch (const Error&) {
    stats_.degraded = true;
    stats_.cost = last_->cost;
    stats_.defect = last_->defect_norm;
  }
  stats_.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return *policy_;
}

long closed_loop_steps(double t0, double t_end, double control_dt) {
  if (!(control_dt > 0.0)) throw ConfigurationError("closed loop: control_dt must be > 0");
  if (!(t_end > t0)) throw ConfigurationError("closed loop: t_end must be after t0");
  return static_cast<long>(std::ceil((t_end - t0) / control_dt - 1e-9));
}

ClosedLoopResult run_closed_loop(Mpc& mpc, const ControlledSystem& plant, const StateVector& x0, double t0,
                                 double t_end, double control_dt, const std::vector<Vector>& disturbance,
                                 const IntegratorSettings& plant_settings) {
  plant_settings.validate();
  const long steps = closed_loop_steps(t0, t_end, control_dt);
  if (!disturbance.empty() && static_cast<long>(disturbance.size()) != steps) {
    throw ConfigurationError("closed loop: disturbance has " + std::to_string(disturbance.size()) +
                             " rows, expected one per control step (" + std::to_string(steps) + ")");
  }
  if (!mpc.initialized()) mpc.initialize(x0, t0);

  ClosedLoopResult out;
  out.states = StateTrajectory(InterpolationMode::kLinear);
  out.controls = ControlTrajectory(InterpolationMode::kZeroOrderHold);
  out.states.push_back(t0, x0);
  Vector x = x0;
  const int substeps = interval_substeps(control_dt, plant_settings.dt);
  for (long k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * control_dt;
    StateFeedbackController policy = mpc.step(x, t);
    MpcStepStats stats = mpc.last_stats();
    stats.step = static_cast<int>(k);
    out.stats.push_back(stats);
    const Vector u = clamp_to(policy.evaluate(x, t).u, mpc.solver_settings());
    out.controls.push_back(t, u);
    try {
      x = integrate_interval(plant, x, u, t, control_dt, substeps);
    } catch (const NumericalFault& e) {
      throw NumericalFault("closed loop step " + std::to_string(k) + ": " + e.what(), e.index(), t);
    }
    if (!disturbance.empty()) {
      if (disturbance[static_cast<std::size_t>(k)].size() != x.size()) {
        throw ConfigurationError("closed loop: disturbance row " + std::to_string(k) + " has wrong dimension");
      }
      x += disturbance[static_cast<std::size_t>(k)];
    }
    out.states.push_back(t0 + static_cast<double>(k + 1) * control_dt, x);
  }
  return out;
}

}  // namespace octrl
