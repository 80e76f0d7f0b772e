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

#include <functional>
#include <memory>

#include "octrl/core/controller.hpp"
#include "octrl/core/discrete_trajectory.hpp"
#include "octrl/core/system.hpp"
#include "octrl/integrate/symplectic_system.hpp"

namespace octrl {

enum class IntegrationScheme { kEuler, kRk4, kRk45Adaptive, kSymplecticEuler };

struct IntegratorSettings {
  IntegrationScheme scheme = IntegrationScheme::kRk4;
  /// Fixed step, or the initial step of the adaptive scheme.
  double dt = 0.01;
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  long max_steps = 10'000'000;

  void validate() const;
};

using VectorField = std::function<Vector(const Vector& x, double t)>;

/// One classical RK4 step.
Vector rk4_step(const VectorField& f, const Vector& x, double t, double h);
/// One explicit Euler step.
Vector euler_step(const VectorField& f, const Vector& x, double t, double h);

/// Number of fixed steps covering [t0, t1]; the last one may be shorter.
long fixed_step_count(double t0, double t1, double dt);

/// Fixed-step integration (Euler or RK4) of x' = f(x, t). The last step is shortened to land on t1.
StateTrajectory integrate_fixed(const VectorField& f, const StateVector& x0, double t0, double t1,
                                const IntegratorSettings& settings);
StateTrajectory integrate_fixed(const DynamicalSystem& sys, const StateVector& x0, double t0, double t1,
                                const IntegratorSettings& settings);
/// Closed-loop integration; requires an attached controller.
StateTrajectory integrate_fixed(const ControlledSystem& sys, const StateVector& x0, double t0, double t1,
                                const IntegratorSettings& settings);

/// Result of adaptive integration. `rejected_steps` counts error-test failures.
struct AdaptiveStats {
  long accepted_steps = 0;
  long rejected_steps = 0;
};

/// Dormand-Prince 5(4) with the standard elementary step-size controller.
StateTrajectory integrate_adaptive(const VectorField& f, const StateVector& x0, double t0, double t1,
                                   const IntegratorSettings& settings, AdaptiveStats* stats = nullptr);
StateTrajectory integrate_adaptive(const DynamicalSystem& sys, const StateVector& x0, double t0, double t1,
                                   const IntegratorSettings& settings, AdaptiveStats* stats = nullptr);
StateTrajectory integrate_adaptive(const ControlledSystem& sys, const StateVector& x0, double t0, double t1,
                                   const IntegratorSettings& settings, AdaptiveStats* stats = nullptr);

/// Semi-implicit Euler: v+ = v + dt a(p, v, u, t); p+ = p + dt v+. An empty `u` means zero input.
StateTrajectory integrate_symplectic(const SymplecticSystem& sys, const StateVector& x0, double t0, double t1,
                                     const IntegratorSettings& settings, const ControlVector& u = {});

/// Dispatches on settings.scheme (Euler, RK4 or RK45) for a plain vector field.
StateTrajectory integrate(const VectorField& f, const StateVector& x0, double t0, double t1,
                          const IntegratorSettings& settings);

struct ClosedLoopTrajectory {
  StateTrajectory states;
  ControlTrajectory controls;
};

/// Offline closed-loop simulation: the controller is sampled every control_dt and held between
/// samples while the plant is integrated with `settings`.
ClosedLoopTrajectory simulate_closed_loop(const ControlledSystem& sys, Controller& controller,
                                          const StateVector& x0, double t0, double t1, double control_dt,
                                          const IntegratorSettings& settings);

}  // namespace octrl
