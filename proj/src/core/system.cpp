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

#include "octrl/core/system.hpp"

#include <cmath>
#include <string>

#include "octrl/core/errors.hpp"

namespace octrl {
namespace {

void require_finite(const Vector& v, const std::string& who, double t) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i))) {
      throw NumericalFault(who + ": non-finite derivative component " + std::to_string(i) + " at t=" +
                               std::to_string(t),
                           i, t);
    }
  }
}

}  // namespace

DynamicalSystem::DynamicalSystem(int state_dim, Rhs rhs) : state_dim_(state_dim), rhs_(std::move(rhs)) {
  if (state_dim_ <= 0) throw ConfigurationError("system: state dimension must be positive");
  if (!rhs_) throw ConfigurationError("system: missing rhs");
}

Vector DynamicalSystem::evaluate(const StateVector& x, double t) const {
  if (x.size() != state_dim_) {
    throw ConfigurationError("system: state has dimension " + std::to_string(x.size()) + ", expected " +
                             std::to_string(state_dim_));
  }
  Vector dx = rhs_(x, t);
  if (dx.size() != state_dim_) throw ConfigurationError("system: rhs returned wrong dimension");
  require_finite(dx, "system", t);
  return dx;
}

ControlledSystem::ControlledSystem(std::string name, int state_dim, int control_dim, Rhs rhs, DualRhs dual_rhs,
                                   JacobianFn analytic_jacobian)
    : name_(std::move(name)),
      state_dim_(state_dim),
      control_dim_(control_dim),
      rhs_(std::move(rhs)),
      dual_rhs_(std::move(dual_rhs)),
      analytic_jacobian_(std::move(analytic_jacobian)) {
  if (state_dim_ <= 0 || control_dim_ < 0) throw ConfigurationError(name_ + ": invalid dimensions");
  if (!rhs_) throw ConfigurationError(name_ + ": missing rhs");
}

void ControlledSystem::check_dims(const StateVector& x, const ControlVector& u) const {
  if (x.size() != state_dim_ || u.size() != control_dim_) {
    throw ConfigurationError(name_ + ": got x[" + std::to_string(x.size()) + "], u[" + std::to_string(u.size()) +
                             "], expected x[" + std::to_string(state_dim_) + "], u[" +
                             std::to_string(control_dim_) + "]");
  }
}

Vector ControlledSystem::evaluate_dynamics(const StateVector& x, const ControlVector& u, double t) const {
  check_dims(x, u);
  Vector dx = rhs_(x, u, t);
  if (dx.size() != state_dim_) throw ConfigurationError(name_ + ": rhs returned wrong dimension");
  require_finite(dx, name_, t);
  return dx;
}

DualVector ControlledSystem::evaluate_dual(const DualVector& x, const DualVector& u, double t) const {
  if (!dual_rhs_) throw ConfigurationError(name_ + ": no dual-number rhs, automatic differentiation unavailable");
  if (x.size() != state_dim_ || u.size() != control_dim_) throw ConfigurationError(name_ + ": dimension mismatch");
  DualVector dx = dual_rhs_(x, u, t);
  if (dx.size() != state_dim_) throw ConfigurationError(name_ + ": rhs returned wrong dimension");
  return dx;
}

StateControlJacobians ControlledSystem::analytic_jacobian(const StateVector& x, const ControlVector& u,
                                                          double t) const {
  if (!analytic_jacobian_) throw ConfigurationError(name_ + ": no analytic Jacobian provided");
  check_dims(x, u);
  return analytic_jacobian_(x, u, t);
}

Vector ControlledSystem::closed_loop_rhs(const StateVector& x, double t) const {
  if (!controller_) throw ConfigurationError(name_ + ": closed-loop evaluation without an attached controller");
  return evaluate_dynamics(x, controller_->compute_control(x, t), t);
}

DynamicalSystem ControlledSystem::closed_loop() const {
  if (!controller_) throw ConfigurationError(name_ + ": closed-loop evaluation without an attached controller");
  ControlledSystem self = *this;
  return DynamicalSystem(state_dim_, [self](const StateVector& x, double t) { return self.closed_loop_rhs(x, t); });
}

}  // namespace octrl
