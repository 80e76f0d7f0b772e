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

#include "octrl/core/system.hpp"
#include "octrl/diff/linearizer.hpp"
#include "octrl/integrate/integrator.hpp"

namespace octrl {

enum class DiscretizationMethod { kForwardEuler, kBackwardEuler, kTustin, kExactIntegrated };

/// Discrete transition Jacobians x_{n+1} ~ A_n x_n + B_n u_n over one interval of length dt.
struct DiscreteSensitivities {
  Matrix A_n;
  Matrix B_n;
  double dt = 0.0;
  DiscretizationMethod method = DiscretizationMethod::kForwardEuler;
};

/// Low-order discretization of a continuous linearization.
///   ForwardEuler:  A_n = I + dt A,             B_n = dt B
///   BackwardEuler: A_n = (I - dt A)^-1,        B_n = A_n dt B
///   Tustin:        A_n = (I - dt/2 A)^-1 (I + dt/2 A),  B_n = (I - dt/2 A)^-1 dt B
/// Throws SingularityFault when the implicit factor cannot be inverted.
DiscreteSensitivities sensitivity_approx(const LinearSystemMatrices& lin, double dt, DiscretizationMethod method);

/// Number of equal RK4 sub-steps used for an interval of length dt with steps no longer than max_step.
int interval_substeps(double dt, double max_step);

/// Integrates x' = f(x, u, t) over [t, t + dt] with u held, using `substeps` equal RK4 steps.
StateVector integrate_interval(const ControlledSystem& sys, const StateVector& x, const ControlVector& u, double t,
                               double dt, int substeps);

struct IntervalSensitivity {
  StateVector x_end;
  DiscreteSensitivities sensitivities;
};

/// Same integration as integrate_interval, augmented with the variational equations
///   S_A' = A S_A,        S_A(0) = I
///   S_B' = A S_B + B,    S_B(0) = 0
/// so that (S_A, S_B) are the exact derivatives of the RK4 flow map. `x_end` is bit-identical to
/// integrate_interval.
IntervalSensitivity integrate_interval_with_sensitivities(const ControlledSystem& sys, const StateVector& x,
                                                          const ControlVector& u, double t, double dt, int substeps,
                                                          DerivativeMethod method = DerivativeMethod::kAuto);

/// Exact (integrated) sensitivities with RK4 sub-steps no longer than settings.dt.
DiscreteSensitivities sensitivity_integrate(const ControlledSystem& sys, const StateVector& x,
                                            const ControlVector& u, double t, double dt,
                                            const IntegratorSettings& settings,
                                            DerivativeMethod method = DerivativeMethod::kAuto);

}  // namespace octrl
