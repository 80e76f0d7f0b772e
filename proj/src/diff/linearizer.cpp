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

#include "octrl/diff/linearizer.hpp"

#include "octrl/core/errors.hpp"
#include "octrl/diff/derivatives.hpp"

namespace octrl {

StateControlJacobians system_jacobians(const ControlledSystem& sys, const StateVector& x, const ControlVector& u,
                                       double t, DerivativeMethod method) {
  if (method == DerivativeMethod::kAuto) {
    method = sys.has_analytic_jacobian() ? DerivativeMethod::kAnalytic
             : sys.has_dual_rhs()        ? DerivativeMethod::kAutoDiff
                                         : DerivativeMethod::kFiniteDifference;
  }
  const Eigen::Index nx = sys.state_dim();
  const Eigen::Index nu = sys.control_dim();
  if (x.size() != nx || u.size() != nu) throw ConfigurationError(sys.name() + ": linearization point dimension mismatch");

  Vector z(nx + nu);
  z << x, u;
  Matrix J;
  switch (method) {
    case DerivativeMethod::kAnalytic: {
      StateControlJacobians jac = sys.analytic_jacobian(x, u, t);
      if (jac.A.rows() != nx || jac.A.cols() != nx || jac.B.rows() != nx || jac.B.cols() != nu) {
        throw ConfigurationError(sys.name() + ": analytic Jacobian has wrong shape");
      }
      return jac;
    }
    case DerivativeMethod::kAutoDiff:
      J = jacobian_ad(
          [&](const DualVector& zd) {
            return sys.evaluate_dual(zd.head(nx), zd.tail(nu), t);
          },
          z);
      break;
    case DerivativeMethod::kFiniteDifference:
      J = jacobian_fd([&](const Vector& zz) { return sys.evaluate_dynamics(zz.head(nx), zz.tail(nu), t); }, z);
      break;
    case DerivativeMethod::kAuto:
      break;
  }
  return {J.leftCols(nx), J.rightCols(nu)};
}

LinearSystemMatrices linearize_system(const ControlledSystem& sys, const StateVector& x, const ControlVector& u,
                                      double t, DerivativeMethod method) {
  StateControlJacobians jac = system_jacobians(sys, x, u, t, method);
  return {std::move(jac.A), std::move(jac.B), x, u, t};
}

}  // namespace octrl
