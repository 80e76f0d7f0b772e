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

#include "octrl/core/types.hpp"

namespace octrl {

struct RiccatiSettings {
  double tol = 1e-10;          // stopping tolerance
  long max_iters = 1000000;    // iterations (DARE) or integration steps (CARE)
  double care_dt = 0.01;       // largest RK4 step for the differential Riccati equation
  double lambda0 = 1e-6;       // first Hessian regularization tried by the sweep
  double lambda_max = 1e6;     // regularization cap
};

/// Infinite-horizon LQR solution. The optimal law is u = -K x.
struct LqrSolution {
  Matrix P;
  Matrix K;
  double residual = 0.0;
  long iterations = 0;
};

/// Continuous-time ARE  A'P + PA - P B R^-1 B' P + Q = 0, solved by integrating the Riccati
/// differential equation with RK4 from P = Q until its rate ||dP/dt||_inf falls below tol. The step
/// is care_dt, shortened to 1 / ||A - B R^-1 B' P||_inf (row-sum norm) when the flow is stiff.
/// Throws ConvergenceFault (with the last residual) on divergence or when max_iters is exceeded,
/// SingularityFault if R is not positive definite.
LqrSolution solve_care(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                       const RiccatiSettings& settings = {});

/// Discrete-time ARE  P = Q + A'PA - A'PB (R + B'PB)^-1 B'PA, by fixed-point iteration from P = Q.
LqrSolution solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                       const RiccatiSettings& settings = {});

/// ||A'P + PA - P B R^-1 B' P + Q||_inf
double care_residual(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R, const Matrix& P);
/// ||Q + A'PA - A'PB (R + B'PB)^-1 B'PA - P||_inf
double dare_residual(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R, const Matrix& P);

}  // namespace octrl
