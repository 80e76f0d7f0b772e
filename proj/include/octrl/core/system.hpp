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
#include <string>
#include <utility>

#include "octrl/core/controller.hpp"
#include "octrl/core/types.hpp"
#include "octrl/diff/dual.hpp"

namespace octrl {

/// Autonomous-input system x' = f(x, t).
class DynamicalSystem {
 public:
  using Rhs = std::function<Vector(const StateVector&, double)>;

  DynamicalSystem(int state_dim, Rhs rhs);

  int state_dim() const { return state_dim_; }
  /// f(x, t). Throws NumericalFault on a non-finite component.
  Vector evaluate(const StateVector& x, double t) const;

 private:
  int state_dim_;
  Rhs rhs_;
};

/// Controlled system x' = f(x, u, t) with an optional attached feedback law.
///
/// The rhs may additionally be provided over dual numbers (enables automatic
/// differentiation) and with hand-derived Jacobians.
class ControlledSystem {
 public:
  using Rhs = std::function<Vector(const StateVector&, const ControlVector&, double)>;
  using DualRhs = std::function<DualVector(const DualVector&, const DualVector&, double)>;
  using JacobianFn = std::function<StateControlJacobians(const StateVector&, const ControlVector&, double)>;

  ControlledSystem(std::string name, int state_dim, int control_dim, Rhs rhs, DualRhs dual_rhs = {},
                   JacobianFn analytic_jacobian = {});

  const std::string& name() const { return name_; }
  int state_dim() const { return state_dim_; }
  int control_dim() const { return control_dim_; }

  /// f(x, u, t). Pure; throws NumericalFault naming the first non-finite component.
  Vector evaluate_dynamics(const StateVector& x, const ControlVector& u, double t) const;

  bool has_dual_rhs() const { return static_cast<bool>(dual_rhs_); }
  DualVector evaluate_dual(const DualVector& x, const DualVector& u, double t) const;

  bool has_analytic_jacobian() const { return static_cast<bool>(analytic_jacobian_); }
  StateControlJacobians analytic_jacobian(const StateVector& x, const ControlVector& u, double t) const;

  void set_controller(std::shared_ptr<Controller> controller) { controller_ = std::move(controller); }
  const std::shared_ptr<Controller>& controller() const { return controller_; }

  /// f(x, controller(x, t), t). Throws ConfigurationError without an attached controller.
  Vector closed_loop_rhs(const StateVector& x, double t) const;

  /// Closed-loop view sharing the attached controller.
  DynamicalSystem closed_loop() const;

 private:
  void check_dims(const StateVector& x, const ControlVector& u) const;

  std::string name_;
  int state_dim_;
  int control_dim_;
  Rhs rhs_;
  DualRhs dual_rhs_;
  JacobianFn analytic_jacobian_;
  std::shared_ptr<Controller> controller_;
};

/// Builds a ControlledSystem from one generic callable
/// `f(const VectorX<S>& x, const VectorX<S>& u, double t) -> VectorX<S>`,
/// instantiated for double and for dual numbers.
template <typename F>
ControlledSystem make_controlled_system(std::string name, int state_dim, int control_dim, F f,
                                        ControlledSystem::JacobianFn analytic_jacobian = {}) {
  ControlledSystem::Rhs rhs = [f](const StateVector& x, const ControlVector& u, double t) -> Vector {
    return f(x, u, t);
  };
  ControlledSystem::DualRhs dual = [f](const DualVector& x, const DualVector& u, double t) -> DualVector {
    return f(x, u, t);
  };
  return ControlledSystem(std::move(name), state_dim, control_dim, std::move(rhs), std::move(dual),
                          std::move(analytic_jacobian));
}

}  // namespace octrl
