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

#include <map>
#include <string>
#include <vector>

#include "octrl/core/system.hpp"
#include "octrl/integrate/symplectic_system.hpp"

namespace octrl::models {

/// State [theta, theta_dot], theta = 0 hanging down.
/// theta_ddot = (u - m g l sin(theta) - b theta_dot) / (m l^2)
struct PendulumParams {
  double m = 1.0;
  double l = 1.0;
  double b = 0.1;
  double g = 9.81;
};

/// State [x, z, phi, x_dot, z_dot, phi_dot], controls [F1, F2] (rotor thrusts).
struct QuadrotorParams {
  double m = 1.0;
  double I = 0.02;
  double l = 0.2;
  double g = 9.81;
};

/// Throws ConfigurationError for m, l <= 0 or b, g < 0.
ControlledSystem pendulum(const PendulumParams& p = {});
SymplecticSystem pendulum_symplectic(const PendulumParams& p = {});
/// Kinetic plus potential energy, zero at rest hanging down.
double pendulum_energy(const PendulumParams& p, const StateVector& x);

/// x1' = x2, x2' = u.
ControlledSystem double_integrator();

/// p'' = -k p + u. Throws ConfigurationError for k <= 0.
SymplecticSystem oscillator(double k = 1.0);
/// 1/2 (k p^2 + v^2)
double oscillator_energy(double k, const StateVector& x);

/// Throws ConfigurationError for m, I, l <= 0 or g < 0.
ControlledSystem planar_quadrotor(const QuadrotorParams& p = {});

/// x' = A x + B u with constant Jacobians.
ControlledSystem linear_system(const Matrix& A, const Matrix& B);

struct ModelParameter {
  std::string name;
  double default_value;
};

struct ModelCatalogEntry {
  std::string name;
  int state_dim;
  int control_dim;
  std::vector<ModelParameter> parameters;
  bool analytic_jacobians;
  bool symplectic_split;
};

/// pendulum, double_integrator, oscillator, planar_quadrotor.
const std::vector<ModelCatalogEntry>& catalog();

/// Builds a catalog model with parameter overrides. Unknown names or parameters raise
/// ConfigurationError.
ControlledSystem make_model(const std::string& name, const std::map<std::string, double>& overrides = {});

}  // namespace octrl::models
