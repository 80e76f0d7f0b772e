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

#include <Eigen/Dense>

namespace octrl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// x(t). Dimension is fixed per problem and checked by the containers that hold it.
using StateVector = Eigen::VectorXd;
/// u(t).
using ControlVector = Eigen::VectorXd;

/// Jacobians of a controlled system rhs: A = df/dx, B = df/du.
struct StateControlJacobians {
  Matrix A;
  Matrix B;
};

}  // namespace octrl
