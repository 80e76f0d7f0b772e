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

#include "octrl/nloc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace octrl {
namespace {

double stage_time(const OptConProblem& p, double dt, std::size_t k) { return p.t0 + static_cast<double>(k) * dt; }

Vector clamp_control(const Vector& u, const NLOCSettings& s) {
  Vector out = u;
  if (s.u_lb) out = out.cwiseMax(*s.u_lb);
  if (s.u_ub) out = out.cwiseMin(*s.u_ub);
  return out;
}

double l1_norm(const std::vector<Vector>& v) {
  double acc = 0.0;
  for (const auto& d : v) acc += d.lpNorm<1>();
  return acc;
}

struct Iterate {
  std::vector<Vector> x;        // N + 1
  std::vector<Vector> u;        // N
  std::vector<Vector> defects;  // N (GNMS), empty for iLQR
  double cost = 0.0;
  double defect_norm = 0.0;
};

class Engine {
 public:
  Engine(const OptConProblem& problem, const NLOCSettings& settings, ParallelExecutor& executor)
      : p_(problem),
        s_(settings),
        ex_(executor),
        cost_(effective_cost(problem, settings)),
        N_(static_cast<std::size_t>(settings.N)),
        dt_(problem.T / settings.N) {}

  double dt() const { return dt_; }
  const CostFunction& cost() const { return cost_; }

  // Single-shooting rollout with controls u_n = clamp(u_ref_n + alpha l_n + K_n (x~_n - x_ref_n)).
  Iterate feedback_rollout(const std::vector<Vector>& u_ref, const std::vector<Vector>* x_ref,
                           const RiccatiSolution* sol, double alpha) const {
    Iterate out;
    out.x.resize(N_ + 1);
    out.u.resize(N_);
    out.x[0] = p_.x0;
    std::vector<double> stage_cost(N_);
    for (std::size_t k = 0; k < N_; ++k) {
      const double t = stage_time(p_, dt_, k);
      Vector u = u_ref[k];
      if (sol) u += alpha * sol->u_ff_delta[k] + sol->K[k] * (out.x[k] - (*x_ref)[k]);
      out.u[k] = clamp_control(u, s_);
      try {
        out.x[k + 1] = integrate_interval(p_.dynamics, out.x[k], out.u[k], t, dt_, s_.substeps);
        if (!out.x[k + 1].allFinite()) throw NumericalFault("rollout: non-finite state", -1, t + dt_);
      } catch (const NumericalFault& e) {
        StateTrajectory partial;
        for (std::size_t j = 0; j <= k; ++j) partial.push_back(stage_time(p_, dt_, j), out.x[j]);
        throw RolloutFault(std::string("rollout diverged in interval ") + std::to_string(k) + ": " + e.what(),
                           std::move(partial), t);
      }
      stage_cost[k] = cost_.evaluate_intermediate(out.x[k], out.u[k], t) * dt_;
    }
    out.cost = sum_cost(stage_cost, out.x[N_]);
    return out;
  }

  // Defects and node cost of a multiple-shooting iterate (x, u already set).
  void evaluate_nodes(Iterate& it) const {
    it.defects.assign(N_, Vector());
    std::vector<double> stage_cost(N_);
    ex_.for_each(N_, [&](std::size_t k) {
      const double t = stage_time(p_, dt_, k);
      const Vector x_end = integrate_interval(p_.dynamics, it.x[k], it.u[k], t, dt_, s_.substeps);
      it.defects[k] = x_end - it.x[k + 1];
      stage_cost[k] = cost_.evaluate_intermediate(it.x[k], it.u[k], t) * dt_;
    });
    for (const auto& d : it.defects) {
      if (!d.allFinite()) throw NumericalFault("multiple shooting: non-finite defect");
    }
    it.cost = sum_cost(stage_cost, it.x[N_]);
    it.defect_norm = l1_norm(it.defects);
  }

  LQOCProblem approximate(const std::vector<Vector>& x, const std::vector<Vector>& u) const {
    if (x.size() != N_ + 1 || u.size() != N_) throw ConfigurationError("lq_approximation: trajectory sizes differ from N");
    const Eigen::Index nx = p_.dynamics.state_dim();
    const Eigen::Index nu = p_.dynamics.control_dim();
    LQOCProblem lq = LQOCProblem::zeros(static_cast<int>(N_), nx, nu);
    const bool gnms = s_.algorithm == Algorithm::kGNMS;
    ex_.for_each(N_ + 1, [&](std::size_t k) {
      const double t = stage_time(p_, dt_, k);
      if (k == N_) {
        const QuadraticApproximation qa =
            cost_.quadratic_approximation(x[k], Vector::Zero(nu), t, CostPhase::kFinal, s_.cost_derivatives);
        lq.q[k] = qa.q;
        lq.q_x[k] = qa.q_x;
        lq.Q[k] = qa.Q_xx;
        return;
      }
      Vector x_end;
      if (s_.sensitivity == DiscretizationMethod::kExactIntegrated) {
        IntervalSensitivity r = integrate_interval_with_sensitivities(p_.dynamics, x[k], u[k], t, dt_, s_.substeps,
                                                                      s_.dynamics_derivatives);
        lq.A[k] = std::move(r.sensitivities.A_n);
        lq.B[k] = std::move(r.sensitivities.B_n);
        x_end = std::move(r.x_end);
      } else {
        const LinearSystemMatrices lin = linearize_system(p_.dynamics, x[k], u[k], t, s_.dynamics_derivatives);
        DiscreteSensitivities ds = sensitivity_approx(lin, dt_, s_.sensitivity);
        lq.A[k] = std::move(ds.A_n);
        lq.B[k] = std::move(ds.B_n);
        if (gnms) x_end = integrate_interval(p_.dynamics, x[k], u[k], t, dt_, s_.substeps);
      }
      if (gnms) lq.d[k] = x_end - x[k + 1];
      QuadraticApproximation qa =
          cost_.quadratic_approximation(x[k], u[k], t, CostPhase::kIntermediate, s_.cost_derivatives);
      qa *= dt_;
      lq.q[k] = qa.q;
      lq.q_x[k] = std::move(qa.q_x);
      lq.q_u[k] = std::move(qa.q_u);
      lq.Q[k] = std::move(qa.Q_xx);
      lq.R[k] = std::move(qa.R_uu);
      lq.P[k] = std::move(qa.P_ux);
    });
    lq.u_lb = s_.u_lb;
    lq.u_ub = s_.u_ub;
    return lq;
  }

 private:
  double sum_cost(const std::vector<double>& stage_cost, const Vector& x_final) const {
    double acc = 0.0;
    for (const double c : stage_cost) acc += c;
    return acc + cost_.evaluate_final(x_final, stage_time(p_, dt_, N_));
  }

  const OptConProblem& p_;
  const NLOCSettings& s_;
  ParallelExecutor& ex_;
  CostFunction cost_;
  std::size_t N_;
  double dt_;
};

IterationLog make_log(int iteration, const Iterate& it, double merit_value, double merit_before, double alpha,
                      double lambda, double expected) {
  IterationLog log;
  log.iteration = iteration;
  log.cost = it.cost;
  log.defect_norm = it.defect_norm;
  log.merit = merit_value;
  log.merit_before = merit_before;
  log.alpha = alpha;
  log.lambda = lambda;
  log.expected_decrease = expected;
  return log;
}

}  // namespace

void OptConProblem::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigurationError("optimal control problem: T must be > 0");
  if (x0.size() != dynamics.state_dim()) throw ConfigurationError("optimal control problem: x0 has wrong dimension");
  if (cost.state_dim() != dynamics.state_dim() || cost.control_dim() != dynamics.control_dim()) {
    throw ConfigurationError("optimal control problem: cost and dynamics dimensions differ");
  }
  if (constraints &&
      (constraints->state_dim() != dynamics.state_dim() || constraints->control_dim() != dynamics.control_dim())) {
    throw ConfigurationError("optimal control problem: constraint and dynamics dimensions differ");
  }
}

void NLOCSettings::validate() const {
  if (N < 1) throw ConfigurationError("solver: N must be >= 1");
  if (substeps < 1) throw ConfigurationError("solver: substeps must be >= 1");
  if (max_iterations < 0) throw ConfigurationError("solver: max_iterations must be >= 0");
  if (alphas.empty()) throw ConfigurationError("solver: line search needs at least one step size");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0 && alphas[i] <= 1.0) || (i > 0 && !(alphas[i] < alphas[i - 1]))) {
      throw ConfigurationError("solver: step sizes must be strictly descending in (0, 1]");
    }
  }
  if (u_lb && u_ub && (u_lb->size() != u_ub->size() || (u_lb->array() > u_ub->array()).any())) {
    throw ConfigurationError("solver: control clamp requires lb <= ub of equal size");
  }
  if (!(constraint_penalty > 0.0)) throw ConfigurationError("solver: constraint_penalty must be > 0");
  if (workers < 1) throw ConfigurationError("solver: workers must be >= 1");
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kMaxIterations:
      return "max_iterations";
    case SolveStatus::kLineSearchFailed:
      return "line_search_failed";
  }
  return "?";
}

CostFunction effective_cost(const OptConProblem& problem, const NLOCSettings& settings) {
  if (!problem.constraints || problem.constraints->empty()) return problem.cost;
  CostFunction cost = problem.cost;
  for (const PenaltyTerm& pt : problem.constraints->to_penalty_terms(settings.constraint_penalty)) {
    if (pt.phase == CostPhase::kFinal) {
      cost.add_final(pt.term);
    } else {
      cost.add_intermediate(pt.term);
    }
  }
  return cost;
}

double trajectory_cost(const CostFunction& cost, const std::vector<Vector>& x, const std::vector<Vector>& u,
                       double t0, double dt) {
  if (x.size() != u.size() + 1) throw ConfigurationError("trajectory_cost: need one more state than controls");
  double acc = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) acc += cost.evaluate_intermediate(x[k], u[k], t0 + k * dt) * dt;
  return acc + cost.evaluate_final(x.back(), t0 + u.size() * dt);
}

RolloutResult rollout(const OptConProblem& problem, const std::vector<Vector>& u, const StateVector& x_start,
                      const NLOCSettings& settings) {
  settings.validate();
  if (u.size() != static_cast<std::size_t>(settings.N)) throw ConfigurationError("rollout: need N controls");
  OptConProblem shifted = problem;
  shifted.x0 = x_start;
  shifted.validate();
  ParallelExecutor serial(1);
  Engine engine(shifted, settings, serial);
  const Iterate it = engine.feedback_rollout(u, nullptr, nullptr, 0.0);
  RolloutResult out;
  for (std::size_t k = 0; k < it.x.size(); ++k) out.states.push_back(problem.t0 + k * engine.dt(), it.x[k]);
  out.cost = it.cost;
  return out;
}

LQOCProblem lq_approximation(const OptConProblem& problem, const std::vector<Vector>& x,
                             const std::vector<Vector>& u, const NLOCSettings& settings,
                             ParallelExecutor& executor) {
  problem.validate();
  settings.validate();
  return Engine(problem, settings, executor).approximate(x, u);
}

LQOCProblem lq_approximation(const OptConProblem& problem, const std::vector<Vector>& x,
                             const std::vector<Vector>& u, const NLOCSettings& settings) {
  ParallelExecutor executor(settings.workers);
  return lq_approximation(problem, x, u, settings, executor);
}

double merit(double cost, double defect_norm, double mu) {
  if (mu < 0.0) throw ConfigurationError("merit: mu must be >= 0");
  return cost + mu * defect_norm;
}

NLOCSolver::NLOCSolver(NLOCSettings settings)
    : settings_((settings.validate(), std::move(settings))), executor_(settings_.workers) {}

NLOCSolution NLOCSolver::solve(const OptConProblem& problem, const InitialGuess& guess) {
  problem.validate();
  settings_.validate();
  const NLOCSettings& s = settings_;
  const auto N = static_cast<std::size_t>(s.N);
  const Eigen::Index nu = problem.dynamics.control_dim();
  const bool gnms = s.algorithm == Algorithm::kGNMS;
  Engine engine(problem, s, executor_);

  // Initial iterate.
  std::vector<Vector> u0(N, Vector::Zero(nu));
  if (!guess.u.empty()) {
    if (guess.u.size() != N) throw ConfigurationError("solver: initial control guess needs N entries");
    u0 = guess.u;
  }
  for (auto& u : u0) {
    if (u.size() != nu) throw ConfigurationError("solver: initial control guess has wrong dimension");
    u = clamp_control(u, s);
  }
  Iterate cur;
  if (gnms) {
    cur.u = std::move(u0);
    cur.x.assign(N + 1, problem.x0);
    if (!guess.x.empty()) {
      if (guess.x.size() != N + 1) throw ConfigurationError("solver: initial state guess needs N + 1 entries");
      cur.x = guess.x;
      cur.x[0] = problem.x0;
    }
    engine.evaluate_nodes(cur);
  } else {
    cur = engine.feedback_rollout(u0, nullptr, nullptr, 0.0);
  }

  NLOCSolution out;
  out.iterations.push_back(make_log(0, cur, cur.cost, cur.cost, 0.0, 0.0, 0.0));
  out.status = SolveStatus::kMaxIterations;

  RiccatiSolution sol;
  bool gains_current = false;
  for (int iter = 1; iter <= s.max_iterations; ++iter) {
    const LQOCProblem lq = engine.approximate(cur.x, cur.u);
    sol = gn_riccati_solve(lq, s.riccati);
    gains_current = true;
    const double expected = sol.expected_decrease();
    const double mu = s.merit_defect_weight >= 0.0 ? s.merit_defect_weight : 10.0 * (std::abs(cur.cost) + 1.0);
    const double m0 = merit(cur.cost, cur.defect_norm, mu);
    const double tol = s.convergence_tol * (1.0 + std::abs(m0));

    if (expected < tol && cur.defect_norm < s.defect_tol) {
      out.status = SolveStatus::kConverged;
      out.iterations.push_back(make_log(iter, cur, m0, m0, 0.0, sol.max_lambda, expected));
      break;
    }

    bool accepted = false;
    Iterate cand;
    double m1 = m0;
    double alpha_used = 0.0;
    for (const double alpha : s.alphas) {
      try {
        if (gnms) {
          cand.x.resize(N + 1);
          cand.u.resize(N);
          for (std::size_t k = 0; k <= N; ++k) cand.x[k] = cur.x[k] + alpha * sol.dx[k];
          for (std::size_t k = 0; k < N; ++k) cand.u[k] = clamp_control(cur.u[k] + alpha * sol.du[k], s);
          engine.evaluate_nodes(cand);
        } else {
          cand = engine.feedback_rollout(cur.u, &cur.x, &sol, alpha);
        }
      } catch (const NumericalFault&) {
        continue;
      }
      m1 = merit(cand.cost, cand.defect_norm, mu);
      const bool decrease = std::isfinite(m1) && m1 < m0;
      const bool armijo_ok = !s.armijo || (m0 - m1) >= s.armijo_c * alpha * std::max(expected, 0.0);
      if (decrease && armijo_ok) {
        accepted = true;
        alpha_used = alpha;
        break;
      }
    }

    if (!accepted) {
      if (expected < tol) {
        out.status = SolveStatus::kConverged;
        out.iterations.push_back(make_log(iter, cur, m0, m0, 0.0, sol.max_lambda, expected));
      } else {
        out.status = SolveStatus::kLineSearchFailed;
        out.message = "line search found no merit decrease although the model predicts " + std::to_string(expected);
        out.iterations.push_back(make_log(iter, cur, m0, m0, 0.0, sol.max_lambda, expected));
      }
      break;
    }

    cur = std::move(cand);
    gains_current = false;
    ++out.accepted_iterations;
    out.iterations.push_back(make_log(iter, cur, m1, m0, alpha_used, sol.max_lambda, expected));
    if (std::abs(m0 - m1) < tol && cur.defect_norm < s.defect_tol) {
      out.status = SolveStatus::kConverged;
      break;
    }
  }

  if (!gains_current) sol = gn_riccati_solve(engine.approximate(cur.x, cur.u), s.riccati);

  const double dt = engine.dt();
  out.x_traj = StateTrajectory(InterpolationMode::kLinear);
  out.u_traj = ControlTrajectory(InterpolationMode::kZeroOrderHold);
  out.K = FeedbackTrajectory(InterpolationMode::kZeroOrderHold);
  for (std::size_t k = 0; k <= N; ++k) {
    const double t = stage_time(problem, dt, k);
    out.x_traj.push_back(t, cur.x[k]);
    if (k < N) {
      out.u_traj.push_back(t, cur.u[k]);
      out.K.push_back(t, sol.K[k]);
    }
  }
  out.cost = cur.cost;
  out.defect_norm = cur.defect_norm;
  if (out.status == SolveStatus::kMaxIterations) out.message = "maximum number of iterations reached";
  return out;
}

NLOCSolution solve(const OptConProblem& problem, const NLOCSettings& settings, const InitialGuess& guess) {
  NLOCSolver solver(settings);
  return solver.solve(problem, guess);
}

StateFeedbackController update_policy_from_solution(const NLOCSolution& solution) {
  StateTrajectory x_ref(InterpolationMode::kZeroOrderHold);
  for (std::size_t k = 0; k < solution.u_traj.size(); ++k) x_ref.push_back(solution.x_traj.time(k), solution.x_traj[k]);
  return StateFeedbackController(solution.u_traj, solution.K, std::move(x_ref));
}

StateFeedbackController NLOCSolution::policy() const { return update_policy_from_solution(*this); }

}  // namespace octrl
