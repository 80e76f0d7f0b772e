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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "octrl/constraint/constraint.hpp"
#include "octrl/core/errors.hpp"
#include "octrl/cost/terms.hpp"
#include "octrl/models/models.hpp"
#include "octrl/nloc/solver.hpp"
#include "support/oracles.hpp"
#include "support/util.hpp"

namespace octrl {
namespace {

using testing::max_abs;
using testing::vec;

Matrix diag(std::initializer_list<double> v) { return vec(v).asDiagonal(); }

OptConProblem double_integrator_problem(double T = 2.0) {
  CostFunction cost(2, 1);
  cost.add_intermediate(std::make_shared<QuadraticTerm>(diag({1, 1}), diag({0.1}), vec({0, 0}), vec({0})));
  cost.add_final(std::make_shared<QuadraticTerm>(diag({10, 10}), Matrix::Zero(1, 1), vec({0, 0}), vec({0})));
  return {models::double_integrator(), cost, std::nullopt, vec({1, 0}), T, 0.0};
}

OptConProblem swing_up_problem() {
  CostFunction cost(2, 1);
  cost.add_intermediate(std::make_shared<QuadraticTerm>(diag({0, 0}), diag({0.1}), vec({M_PI, 0}), vec({0})));
  cost.add_final(std::make_shared<QuadraticTerm>(diag({100, 10}), Matrix::Zero(1, 1), vec({M_PI, 0}), vec({0})));
  return {models::pendulum(), cost, std::nullopt, vec({0, 0}), 3.0, 0.0};
}

NLOCSettings swing_up_settings(Algorithm algorithm) {
  NLOCSettings s;
  s.algorithm = algorithm;
  s.N = 150;
  s.max_iterations = 200;
  return s;
}

bool bit_identical(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    if (std::memcmp(a[i].data(), b[i].data(), sizeof(double) * static_cast<std::size_t>(a[i].size())) != 0) {
      return false;
    }
  }
  return true;
}

bool bit_identical(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

TEST(Rollout, ConstantControlOnDoubleIntegrator) {
  auto problem = double_integrator_problem(1.0);
  NLOCSettings s;
  s.N = 10;
  const auto r = rollout(problem, std::vector<Vector>(10, vec({1})), vec({0, 0}), s);
  ASSERT_EQ(r.states.size(), 11u);
  double cost = 0.0;
  for (std::size_t n = 0; n <= 10; ++n) {
    const double t = 0.1 * static_cast<double>(n);
    EXPECT_NEAR(r.states.time(n), t, 1e-15);
    // RK4 integrates the quadratic position exactly
    EXPECT_LT(max_abs(r.states[n] - vec({t * t / 2, t})), 1e-14);
    if (n < 10) cost += 0.1 * (std::pow(t * t / 2, 2) + t * t + 0.1);
  }
  const double tN = 1.0;
  cost += 10 * (0.25 * tN * tN * tN * tN + tN * tN);
  EXPECT_NEAR(r.cost, cost, 1e-12);
}

TEST(Rollout, ClampAppliesToControls) {
  auto problem = double_integrator_problem(1.0);
  NLOCSettings s;
  s.N = 10;
  s.u_lb = vec({-0.5});
  s.u_ub = vec({0.5});
  const auto r = rollout(problem, std::vector<Vector>(10, vec({3})), vec({0, 0}), s);
  EXPECT_NEAR(r.states.back()(1), 0.5, 1e-14);
}

TEST(Rollout, NonFiniteStateFaults) {
  CostFunction cost(1, 1);
  OptConProblem p{ControlledSystem("blowup", 1, 1, [](const StateVector& x, const ControlVector&, double) -> Vector {
                    return x.array().square();
                  }),
                  cost, std::nullopt, vec({1}), 2.0, 0.0};
  NLOCSettings s;
  s.N = 20;
  try {
    rollout(p, std::vector<Vector>(20, vec({0})), vec({1}), s);
    ADD_FAILURE() << "expected RolloutFault";
  } catch (const RolloutFault& e) {
    EXPECT_GT(e.partial().size(), 1u);
    EXPECT_LT(e.partial().size(), 21u);
  }
}

TEST(TrajectoryCost, RectangleRulePlusFinal) {
  CostFunction cost(1, 1);
  cost.add_intermediate(std::make_shared<QuadraticTerm>(diag({1}), diag({2}), vec({0}), vec({0})));
  cost.add_final(std::make_shared<QuadraticTerm>(diag({3}), Matrix::Zero(1, 1), vec({0}), vec({0})));
  const double c = trajectory_cost(cost, {vec({1}), vec({2}), vec({3})}, {vec({1}), vec({-1})}, 0.0, 0.5);
  EXPECT_DOUBLE_EQ(c, 0.5 * (1 + 2) + 0.5 * (4 + 2) + 27);
}

TEST(Merit, CostPlusWeightedDefect) {
  EXPECT_DOUBLE_EQ(merit(2.0, 3.0, 10.0), 32.0);
  EXPECT_DOUBLE_EQ(merit(2.0, 0.0, 10.0), 2.0);
}

TEST(LqApproximation, DoubleIntegratorStagesAreExactZoh) {
  const auto problem = double_integrator_problem();
  NLOCSettings s;
  s.N = 20;
  const double h = problem.T / s.N;
  std::mt19937 rng(4);
  std::vector<Vector> x, u;
  for (int n = 0; n <= s.N; ++n) x.push_back(testing::random_vector(rng, 2, -1, 1));
  for (int n = 0; n < s.N; ++n) u.push_back(testing::random_vector(rng, 1, -1, 1));
  s.algorithm = Algorithm::kGNMS;
  const auto lq = lq_approximation(problem, x, u, s);
  Matrix A(2, 2), B(2, 1);
  A << 1, h, 0, 1;
  B << h * h / 2, h;
  for (std::size_t n = 0; n < u.size(); ++n) {
    EXPECT_LT(max_abs(lq.A[n] - A), 1e-12);
    EXPECT_LT(max_abs(lq.B[n] - B), 1e-12);
    EXPECT_LT(max_abs(lq.d[n] - (A * x[n] + B * u[n] - x[n + 1])), 1e-12);
    EXPECT_LT(max_abs(lq.Q[n] - 2 * h * diag({1, 1})), 1e-14);
    EXPECT_LT(max_abs(lq.R[n] - 2 * h * diag({0.1})), 1e-14);
    EXPECT_LT(max_abs(lq.q_x[n] - 2 * h * x[n]), 1e-14);
    EXPECT_LT(max_abs(lq.q_u[n] - 0.2 * h * u[n]), 1e-14);
  }
  EXPECT_LT(max_abs(lq.Q.back() - diag({20, 20})), 1e-14);
  EXPECT_LT(max_abs(lq.q_x.back() - 20 * x.back()), 1e-13);

  s.algorithm = Algorithm::kILQR;
  const auto ilqr = lq_approximation(problem, x, u, s);
  for (const auto& d : ilqr.d) EXPECT_EQ(max_abs(d), 0.0);
}

TEST(LqApproximation, IndependentOfWorkerCount) {
  const auto problem = swing_up_problem();
  NLOCSettings s;
  s.N = 64;
  std::mt19937 rng(5);
  std::vector<Vector> x, u;
  for (int n = 0; n <= s.N; ++n) x.push_back(testing::random_vector(rng, 2, -3, 3));
  for (int n = 0; n < s.N; ++n) u.push_back(testing::random_vector(rng, 1, -3, 3));
  ParallelExecutor one(1), four(4);
  const auto a = lq_approximation(problem, x, u, s, one);
  const auto b = lq_approximation(problem, x, u, s, four);
  for (std::size_t n = 0; n < u.size(); ++n) {
    EXPECT_TRUE(bit_identical(a.A[n], b.A[n]));
    EXPECT_TRUE(bit_identical(a.B[n], b.B[n]));
    EXPECT_TRUE(bit_identical(a.Q[n], b.Q[n]));
  }
  EXPECT_TRUE(bit_identical(a.d, b.d));
  EXPECT_TRUE(bit_identical(a.q_x, b.q_x));
  EXPECT_TRUE(bit_identical(a.q_u, b.q_u));
}

TEST(ParallelExecutor, CoversEveryIndexOnceAndPropagatesErrors) {
  ParallelExecutor pool(3);
  std::vector<int> hits(1000, 0);
  pool.for_each(hits.size(), [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(pool.for_each(10, [](std::size_t i) {
    if (i == 7) throw ConfigurationError("boom");
  }),
               ConfigurationError);
  pool.for_each(0, [](std::size_t) { FAIL(); });
}

TEST(ResolveWorkers, FlagThenEnvironmentThenOne) {
  EXPECT_EQ(resolve_workers(3), 3);
  setenv("OCTRL_WORKERS", "5", 1);
  EXPECT_EQ(resolve_workers(0), 5);
  unsetenv("OCTRL_WORKERS");
  EXPECT_EQ(resolve_workers(0), 1);
}

// The double integrator with exact sensitivities is an LQ problem: both solvers must reproduce the
// discrete LQR controls after one Newton step.
class LqExactness : public ::testing::TestWithParam<Algorithm> {};

TEST_P(LqExactness, OneStepToDiscreteLqr) {
  const auto problem = double_integrator_problem();
  NLOCSettings s;
  s.algorithm = GetParam();
  s.N = 100;
  const auto sol = solve(problem, s);
  ASSERT_TRUE(sol.converged()) << sol.message;
  EXPECT_EQ(sol.accepted_iterations, 1);
  const double h = problem.T / s.N;
  Matrix Ad(2, 2), Bd(2, 1);
  Ad << 1, h, 0, 1;
  Bd << h * h / 2, h;
  const auto u = testing::lqr_closed_form_controls(Ad, Bd, Matrix(h * diag({1, 1})), Matrix(h * diag({0.1})),
                                                   diag({10, 10}), s.N, problem.x0);
  double err = 0.0;
  for (std::size_t n = 0; n < u.size(); ++n) err = std::max(err, max_abs(sol.u_traj[n] - u[n]));
  EXPECT_LT(err, 1e-8);
  EXPECT_LT(sol.defect_norm, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Algorithms, LqExactness, ::testing::Values(Algorithm::kILQR, Algorithm::kGNMS));

class SwingUp : public ::testing::TestWithParam<Algorithm> {};

TEST_P(SwingUp, ConvergesWithDecreasingMerit) {
  const auto sol = solve(swing_up_problem(), swing_up_settings(GetParam()));
  ASSERT_TRUE(sol.converged()) << sol.message;
  EXPECT_LT(std::abs(sol.x_traj.back()(0) - M_PI), 0.05);
  EXPECT_LT(std::abs(sol.x_traj.back()(1)), 0.2);
  EXPECT_LT(sol.defect_norm, 1e-8);
  EXPECT_EQ(sol.iterations.back().alpha, 0.0);
  int accepted = 0;
  for (const auto& it : sol.iterations) {
    if (it.alpha > 0) {
      ++accepted;
      EXPECT_LT(it.merit, it.merit_before) << "iteration " << it.iteration;
    }
  }
  EXPECT_EQ(accepted, sol.accepted_iterations);
  EXPECT_LT(sol.cost, 4.064);
}

INSTANTIATE_TEST_SUITE_P(Algorithms, SwingUp, ::testing::Values(Algorithm::kILQR, Algorithm::kGNMS));

// Both methods converge linearly along the flat directions of this problem, so the controls only
// agree once the stopping tolerance is well below the default.
TEST(Solve, BothAlgorithmsReachTheSameOptimum) {
  auto sa = swing_up_settings(Algorithm::kILQR);
  auto sb = swing_up_settings(Algorithm::kGNMS);
  sa.convergence_tol = sb.convergence_tol = 1e-14;
  sa.max_iterations = sb.max_iterations = 1000;
  const auto a = solve(swing_up_problem(), sa);
  const auto b = solve(swing_up_problem(), sb);
  ASSERT_TRUE(a.converged() && b.converged());
  EXPECT_NEAR(a.cost, b.cost, 1e-6 * a.cost);
  for (std::size_t n = 0; n < a.u_traj.size(); ++n) EXPECT_LT(max_abs(a.u_traj[n] - b.u_traj[n]), 1e-5);
}

TEST(Solve, WorkerCountDoesNotChangeResult) {
  auto s = swing_up_settings(Algorithm::kGNMS);
  s.workers = 1;
  const auto a = solve(swing_up_problem(), s);
  s.workers = 3;
  const auto b = solve(swing_up_problem(), s);
  EXPECT_TRUE(bit_identical(a.u_traj.values(), b.u_traj.values()));
  EXPECT_TRUE(bit_identical(a.x_traj.values(), b.x_traj.values()));
  EXPECT_EQ(a.iterations.size(), b.iterations.size());
}

TEST(Solve, MaxIterationsStatus) {
  auto s = swing_up_settings(Algorithm::kGNMS);
  s.max_iterations = 1;
  const auto sol = solve(swing_up_problem(), s);
  EXPECT_EQ(sol.status, SolveStatus::kMaxIterations);
  EXPECT_FALSE(sol.converged());
  EXPECT_STREQ(to_string(sol.status), to_string(SolveStatus::kMaxIterations));
}

TEST(Solve, ControlClampRespected) {
  auto s = swing_up_settings(Algorithm::kILQR);
  s.u_lb = vec({-4});
  s.u_ub = vec({4});
  s.max_iterations = 50;
  const auto sol = solve(swing_up_problem(), s);
  for (const auto& u : sol.u_traj.values()) {
    EXPECT_GE(u(0), -4.0);
    EXPECT_LE(u(0), 4.0);
  }
}

TEST(Solve, ConstraintPenaltyPullsTowardsBox) {
  auto problem = double_integrator_problem();
  NLOCSettings s;
  s.N = 50;
  const auto free = solve(problem, s);
  double free_peak = 0.0;
  for (const auto& u : free.u_traj.values()) free_peak = std::max(free_peak, std::abs(u(0)));
  ASSERT_GT(free_peak, 0.6);
  ConstraintContainer cc(2, 1);
  cc.add_intermediate(std::make_shared<ControlBoxConstraint>(2, vec({-0.5}), vec({0.5})));
  problem.constraints = cc;
  s.constraint_penalty = 1e4;
  // Rows that become active along a step make the Gauss-Newton model optimistic, so a stiff
  // penalty needs step sizes well below the default floor of 1/64.
  s.alphas.clear();
  for (double a = 1.0; a > 1e-9; a *= 0.5) s.alphas.push_back(a);
  const auto boxed = solve(problem, s);
  ASSERT_TRUE(boxed.converged()) << boxed.message;
  double peak = 0.0;
  for (const auto& u : boxed.u_traj.values()) peak = std::max(peak, std::abs(u(0)));
  EXPECT_LT(peak, 0.51);
}

TEST(Solve, InitialGuessIsUsed) {
  const auto problem = swing_up_problem();
  const auto s = swing_up_settings(Algorithm::kGNMS);
  const auto first = solve(problem, s);
  ASSERT_TRUE(first.converged());
  InitialGuess warm{first.u_traj.values(), first.x_traj.values()};
  const auto again = solve(problem, s, warm);
  EXPECT_TRUE(again.converged());
  EXPECT_EQ(again.accepted_iterations, 0);
  EXPECT_NEAR(again.cost, first.cost, 1e-12 * first.cost);
}

TEST(Solve, InvalidSettingsRejected) {
  NLOCSettings s;
  s.N = 0;
  EXPECT_THROW(solve(double_integrator_problem(), s), ConfigurationError);
  auto p = double_integrator_problem();
  p.T = 0.0;
  EXPECT_THROW(solve(p, NLOCSettings{}), ConfigurationError);
  NLOCSettings bad_guess;
  InitialGuess g;
  g.u.assign(3, vec({0}));
  EXPECT_THROW(solve(double_integrator_problem(), bad_guess, g), ConfigurationError);
}

TEST(Policy, ReproducesFeedforwardOnNominalTrajectory) {
  const auto sol = solve(swing_up_problem(), swing_up_settings(Algorithm::kGNMS));
  auto policy = update_policy_from_solution(sol);
  for (std::size_t n = 0; n < sol.u_traj.size(); ++n) {
    EXPECT_LT(max_abs(policy.compute_control(sol.x_traj[n], sol.u_traj.time(n)) - sol.u_traj[n]), 1e-12);
  }
  // an off-nominal state adds K dx
  const Vector dx = vec({0.01, -0.02});
  const Vector expected = sol.u_traj[5] + sol.K[5] * dx;
  EXPECT_LT(max_abs(policy.compute_control(sol.x_traj[5] + dx, sol.u_traj.time(5)) - expected), 1e-12);
}

}  // namespace
}  // namespace octrl
