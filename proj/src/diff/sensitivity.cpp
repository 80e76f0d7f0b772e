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

#include "octrl/diff/sensitivity.hpp"

#include <cmath>
#include <string>

#include "octrl/core/errors.hpp"

namespace octrl {
namespace {

Matrix checked_inverse(const Matrix& M, const char* who) {
  Eigen::FullPivLU<Matrix> lu(M);
  if (!lu.isInvertible()) throw SingularityFault(std::string(who) + ": implicit discretization factor is singular");
  return lu.inverse();
}

}  // namespace

DiscreteSensitivities sensitivity_approx(const LinearSystemMatrices& lin, double dt, DiscretizationMethod method) {
  if (!(dt > 0.0)) throw ConfigurationError("sensitivity_approx: dt must be > 0");
  const Eigen::Index n = lin.A.rows();
  const Matrix I = Matrix::Identity(n, n);
  DiscreteSensitivities out;
  out.dt = dt;
  out.method = method;
  switch (method) {
    case DiscretizationMethod::kForwardEuler:
      out.A_n = I + dt * lin.A;
      out.B_n = dt * lin.B;
      break;
    case DiscretizationMethod::kBackwardEuler:
      out.A_n = checked_inverse(I - dt * lin.A, "backward Euler");
      out.B_n = out.A_n * (dt * lin.B);
      break;
    case DiscretizationMethod::kTustin: {
      const Matrix inv = checked_inverse(I - (0.5 * dt) * lin.A, "Tustin");
      out.A_n = inv * (I + (0.5 * dt) * lin.A);
      out.B_n = inv * (dt * lin.B);
      break;
    }
    case DiscretizationMethod::kExactIntegrated:
      throw ConfigurationError("sensitivity_approx: use sensitivity_integrate for exact sensitivities");
  }
  return out;
}

int interval_substeps(double dt, double max_step) {
  if (!(max_step > 0.0)) throw ConfigurationError("substep length must be > 0");
  return static_cast<int>(fixed_step_count(0.0, dt, max_step));
}

StateVector integrate_interval(const ControlledSystem& sys, const StateVector& x, const ControlVector& u, double t,
                               double dt, int substeps) {
  const VectorField f = [&sys, &u](const Vector& xs, double ts) { return sys.evaluate_dynamics(xs, u, ts); };
  const double h = dt / substeps;
  Vector xk = x;
  for (int k = 0; k < substeps; ++k) xk = rk4_step(f, xk, t + k * h, h);
  return xk;
}

IntervalSensitivity integrate_interval_with_sensitivities(const ControlledSystem& sys, const StateVector& x,
                                                          const ControlVector& u, double t, double dt, int substeps,
                                                          DerivativeMethod method) {
  const Eigen::Index nx = sys.state_dim();
  const Eigen::Index nu = sys.control_dim();
  const double h = dt / substeps;
  Vector xk = x;
  Matrix SA = Matrix::Identity(nx, nx);
  Matrix SB = Matrix::Zero(nx, nu);

  for (int k = 0; k < substeps; ++k) {
    const double tk = t + k * h;
    // Stage evaluations mirror rk4_step exactly so the state part stays bit-identical.
    const Vector k1 = sys.evaluate_dynamics(xk, u, tk);
    const StateControlJacobians J1 = system_jacobians(sys, xk, u, tk, method);
    const Matrix k1A = J1.A * SA;
    const Matrix k1B = J1.A * SB + J1.B;

    const Vector x2 = xk + (0.5 * h) * k1;
    const Vector k2 = sys.evaluate_dynamics(x2, u, tk + 0.5 * h);
    const StateControlJacobians J2 = system_jacobians(sys, x2, u, tk + 0.5 * h, method);
    const Matrix k2A = J2.A * (SA + (0.5 * h) * k1A);
    const Matrix k2B = J2.A * (SB + (0.5 * h) * k1B) + J2.B;

    const Vector x3 = xk + (0.5 * h) * k2;
    const Vector k3 = sys.evaluate_dynamics(x3, u, tk + 0.5 * h);
    const StateControlJacobians J3 = system_jacobians(sys, x3, u, tk + 0.5 * h, method);
    const Matrix k3A = J3.A * (SA + (0.5 * h) * k2A);
    const Matrix k3B = J3.A * (SB + (0.5 * h) * k2B) + J3.B;

    const Vector x4 = xk + h * k3;
    const Vector k4 = sys.evaluate_dynamics(x4, u, tk + h);
    const StateControlJacobians J4 = system_jacobians(sys, x4, u, tk + h, method);
    const Matrix k4A = J4.A * (SA + h * k3A);
    const Matrix k4B = J4.A * (SB + h * k3B) + J4.B;

    xk = xk + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    SA = SA + (h / 6.0) * (k1A + 2.0 * k2A + 2.0 * k3A + k4A);
    SB = SB + (h / 6.0) * (k1B + 2.0 * k2B + 2.0 * k3B + k4B);
  }
  if (!xk.allFinite()) throw NumericalFault("sensitivity integration: state became non-finite", -1, t + dt);
  if (!SA.allFinite() || !SB.allFinite()) {
    throw NumericalFault("sensitivity integration: sensitivities became non-finite", -1, t + dt);
  }
  IntervalSensitivity out;
  out.x_end = std::move(xk);
  out.sensitivities.A_n = std::move(SA);
  out.sensitivities.B_n = std::move(SB);
  out.sensitivities.dt = dt;
  out.sensitivities.method = DiscretizationMethod::kExactIntegrated;
  return out;
}

DiscreteSensitivities sensitivity_integrate(const ControlledSystem& sys, const StateVector& x,
                                            const ControlVector& u, double t, double dt,
                                            const IntegratorSettings& settings, DerivativeMethod method) {
  if (!(dt > 0.0)) throw ConfigurationError("sensitivity_integrate: dt must be > 0");
  settings.validate();
  return integrate_interval_with_sensitivities(sys, x, u, t, dt, interval_substeps(dt, settings.dt), method)
      .sensitivities;
}

}  // namespace octrl
