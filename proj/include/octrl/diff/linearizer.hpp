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
#include "octrl/core/types.hpp"

namespace octrl {

enum class DerivativeMethod {
  kFiniteDifference,
  kAutoDiff,
  kAnalytic,
  /// Analytic if the system provides it, else AD, else finite differences.
  kAuto,
};

/// Jacobians A = df/dx, B = df/du evaluated at (x, u, t).
struct LinearSystemMatrices {
  Matrix A;
  Matrix B;
  StateVector x;
  ControlVector u;
  double t = 0.0;
};

LinearSystemMatrices linearize_system(const ControlledSystem& sys, const StateVector& x, const ControlVector& u,
                                      double t, DerivativeMethod method = DerivativeMethod::kAuto);

/// Just the (A, B) pair; shared by the linearizer and the sensitivity integrator.
StateControlJacobians system_jacobians(const ControlledSystem& sys, const StateVector& x, const ControlVector& u,
                                       double t, DerivativeMethod method);

}  // namespace octrl
