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
#include <random>

#include "octrl/core/controller.hpp"
#include "octrl/core/errors.hpp"
#include "octrl/diff/linearizer.hpp"
#include "octrl/integrate/integrator.hpp"
#include "octrl/models/models.hpp"
#include "support/oracles.hpp"
#include "support/util.hpp"

namespace octrl {
namespace {

using testing::max_abs;
using testing::vec;

TEST(Pendulum, Equilibria) {
  const auto p = models::pendulum();
  EXPECT_EQ(p.evaluate_dynamics(vec({0, 0}), vec({0}), 0.0), vec({0, 0}));
  // sin(M_PI) is 1.2e-16 in double precision
  EXPECT_LT(max_abs(p.evaluate_dynamics(vec({M_PI, 0}), vec({0}), 0.0)), 1e-14);
  EXPECT_NEAR(p.evaluate_dynamics(vec({M_PI / 2, 0}), vec({0}), 0.0)(1), -9.81, 1e-12);
}

TEST(Pendulum, FormulaWithCustomParameters) {
  const models::PendulumParams p{2.0, 0.5, 0.3, 9.0};
  const Vector f = models::pendulum(p).evaluate_dynamics(vec({0.4, 1.5}), vec({0.7}), 0.0);
  const double expected = (0.7 - 2.0 * 9.0 * 0.5 * std::sin(0.4) - 0.3 * 1.5) / (2.0 * 0.25);
  EXPECT_DOUBLE_EQ(f(0), 1.5);
  EXPECT_NEAR(f(1), expected, 1e-14);
}

TEST(Pendulum, InvalidParametersRejected) {
  EXPECT_THROW(models::pendulum({0.0, 1.0, 0.1, 9.81}), ConfigurationError);
  EXPECT_THROW(models::pendulum({1.0, -1.0, 0.1, 9.81}), ConfigurationError);
  EXPECT_THROW(models::pendulum({1.0, 1.0, -0.1, 9.81}), ConfigurationError);
}

TEST(Pendulum, EnergyNonIncreasingWithDamping) {
  const models::PendulumParams p;
  auto sys = models::pendulum(p);
  sys.set_controller(std::make_shared<ConstantController>(vec({0})));
  IntegratorSettings s;
  s.dt = 0.001;
  const auto traj = integrate_fixed(sys.closed_loop(), vec({2.5, 0}), 0.0, 10.0, s);
  double previous = models::pendulum_energy(p, traj.front());
  for (const auto& x : traj.values()) {
    const double e = models::pendulum_energy(p, x);
    EXPECT_LE(e, previous + 1e-12);
    previous = e;
  }
}

TEST(Pendulum, SymplecticSplitMatchesFirstOrderForm) {
  const auto sym = models::pendulum_symplectic();
  const auto sys = models::pendulum();
  const Vector a = sym.acceleration(vec({0.3}), vec({-0.7}), vec({0.2}), 0.0);
  EXPECT_DOUBLE_EQ(a(0), sys.evaluate_dynamics(vec({0.3, -0.7}), vec({0.2}), 0.0)(1));
}

TEST(DoubleIntegrator, DynamicsAndLinearization) {
  const auto sys = models::double_integrator();
  EXPECT_EQ(sys.evaluate_dynamics(vec({0, 0}), vec({1}), 0.0), vec({0, 1}));
  EXPECT_EQ(sys.evaluate_dynamics(vec({5, -2}), vec({0}), 0.0), vec({-2, 0}));
  const auto lin = linearize_system(sys, vec({3, 4}), vec({1}), 0.0);
  Matrix A(2, 2), B(2, 1);
  A << 0, 1, 0, 0;
  B << 0, 1;
  EXPECT_EQ(lin.A, A);
  EXPECT_EQ(lin.B, B);
}

TEST(Oscillator, AccelerationEnergyAndPeriod) {
  const double k = 4.0;
  const auto osc = models::oscillator(k);
  EXPECT_DOUBLE_EQ(models::oscillator(1.0).acceleration(vec({1}), vec({0}), vec({0}), 0.0)(0), -1.0);
  EXPECT_DOUBLE_EQ(models::oscillator_energy(k, vec({1, 2})), 0.5 * (k + 4));
  EXPECT_THROW(models::oscillator(0.0), ConfigurationError);

  IntegratorSettings s;
  s.scheme = IntegrationScheme::kSymplecticEuler;
  s.dt = 1e-4;
  const auto traj = integrate_symplectic(osc, vec({1, 0}), 0.0, 10.0, s);
  // downward zero crossings of the position, linearly interpolated
  std::vector<double> crossings;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double a = traj[i - 1](0), b = traj[i](0);
    if (a > 0 && b <= 0) crossings.push_back(traj.time(i - 1) + a / (a - b) * (traj.time(i) - traj.time(i - 1)));
  }
  ASSERT_GE(crossings.size(), 3u);
  const double period = (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  const double expected = 2 * M_PI / std::sqrt(k);
  EXPECT_NEAR(period, expected, 0.01 * expected);
}

TEST(PlanarQuadrotor, HoverAndFreeFall) {
  const models::QuadrotorParams p;
  const auto sys = models::planar_quadrotor(p);
  const double hover = p.m * p.g / 2;
  EXPECT_LT(max_abs(sys.evaluate_dynamics(vec({1, 2, 0, 0, 0, 0}), vec({hover, hover}), 0.0)), 1e-15);
  const Vector fall = sys.evaluate_dynamics(vec({0, 0, 0.3, 1, 2, 3}), vec({0, 0}), 0.0);
  EXPECT_EQ(fall.head(3), vec({1, 2, 3}));
  EXPECT_DOUBLE_EQ(fall(3), 0.0);
  EXPECT_DOUBLE_EQ(fall(4), -p.g);
  EXPECT_DOUBLE_EQ(fall(5), 0.0);
  const Vector tilt = sys.evaluate_dynamics(vec({0, 0, 0.3, 0, 0, 0}), vec({3, 2}), 0.0);
  EXPECT_NEAR(tilt(3), -5 * std::sin(0.3) / p.m, 1e-14);
  EXPECT_NEAR(tilt(4), 5 * std::cos(0.3) / p.m - p.g, 1e-14);
  EXPECT_NEAR(tilt(5), p.l * 1 / p.I, 1e-12);
  EXPECT_THROW(models::planar_quadrotor({1.0, 0.0, 0.2, 9.81}), ConfigurationError);
}

TEST(PlanarQuadrotor, HoverIsFixedPointOfSimulation) {
  const models::QuadrotorParams p;
  const double hover = p.m * p.g / 2;
  ConstantController c(vec({hover, hover}));
  IntegratorSettings s;
  s.dt = 0.01;
  const auto sim = simulate_closed_loop(models::planar_quadrotor(p), c, vec({0.5, 1, 0, 0, 0, 0}), 0.0, 5.0, 0.05, s);
  for (const auto& x : sim.states.values()) EXPECT_LT(max_abs(x - vec({0.5, 1, 0, 0, 0, 0})), 1e-12);
}

TEST(Catalog, AnalyticJacobiansMatchAd) {
  std::mt19937 rng(12);
  for (const auto& entry : models::catalog()) {
    if (!entry.analytic_jacobians) continue;
    const auto sys = models::make_model(entry.name);
    for (int i = 0; i < 100; ++i) {
      const Vector x = testing::random_vector(rng, entry.state_dim, -3, 3);
      const Vector u = testing::random_vector(rng, entry.control_dim, -5, 5);
      const auto an = linearize_system(sys, x, u, 0.0, DerivativeMethod::kAnalytic);
      const auto ad = linearize_system(sys, x, u, 0.0, DerivativeMethod::kAutoDiff);
      EXPECT_LT(max_abs(an.A - ad.A), 1e-10) << entry.name;
      EXPECT_LT(max_abs(an.B - ad.B), 1e-10) << entry.name;
    }
  }
}

TEST(Catalog, ListsAllModelsWithDimensions) {
  std::map<std::string, std::pair<int, int>> dims;
  for (const auto& e : models::catalog()) dims[e.name] = {e.state_dim, e.control_dim};
  EXPECT_EQ(dims.at("pendulum"), std::make_pair(2, 1));
  EXPECT_EQ(dims.at("double_integrator"), std::make_pair(2, 1));
  EXPECT_EQ(dims.at("oscillator"), std::make_pair(2, 1));
  EXPECT_EQ(dims.at("planar_quadrotor"), std::make_pair(6, 2));
}

TEST(Catalog, MakeModelOverridesAndErrors) {
  const auto p = models::make_model("pendulum", {{"g", 1.0}, {"b", 0.0}});
  EXPECT_NEAR(p.evaluate_dynamics(vec({M_PI / 2, 0}), vec({0}), 0.0)(1), -1.0, 1e-14);
  EXPECT_THROW(models::make_model("cartpole"), ConfigurationError);
  EXPECT_THROW(models::make_model("pendulum", {{"mass", 2.0}}), ConfigurationError);
}

}  // namespace
}  // namespace octrl
