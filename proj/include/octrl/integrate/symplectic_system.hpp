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
#include <string>

#include "octrl/core/system.hpp"

namespace octrl {

/// Second-order system with state [p; v], p' = v and v' = a(p, v, u, t).
class SymplecticSystem {
 public:
  using Acceleration = std::function<Vector(const Vector& p, const Vector& v, const ControlVector& u, double t)>;

  SymplecticSystem(std::string name, int position_dim, int velocity_dim, int control_dim, Acceleration acceleration,
                   ControlledSystem as_controlled);

  const std::string& name() const { return name_; }
  int position_dim() const { return position_dim_; }
  int velocity_dim() const { return velocity_dim_; }
  int state_dim() const { return position_dim_ + velocity_dim_; }
  int control_dim() const { return control_dim_; }

  Vector acceleration(const Vector& p, const Vector& v, const ControlVector& u, double t) const;

  /// Same dynamics as a first-order controlled system [v; a].
  const ControlledSystem& as_controlled_system() const { return controlled_; }

 private:
  std::string name_;
  int position_dim_;
  int velocity_dim_;
  int control_dim_;
  Acceleration acceleration_;
  ControlledSystem controlled_;
};

/// Builds a SymplecticSystem from a generic acceleration callable
/// `a(const VectorX<S>& p, const VectorX<S>& v, const VectorX<S>& u, double t) -> VectorX<S>`.
template <typename F>
SymplecticSystem make_symplectic_system(std::string name, int position_dim, int control_dim, F accel,
                                        ControlledSystem::JacobianFn analytic_jacobian = {}) {
  const int n = position_dim;
  auto first_order = [accel, n](const auto& x, const auto& u, double t) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    VectorX<S> p = x.head(n);
    VectorX<S> v = x.tail(n);
    VectorX<S> a = accel(p, v, VectorX<S>(u), t);
    VectorX<S> dx(2 * n);
    dx << v, a;
    return dx;
  };
  ControlledSystem controlled = make_controlled_system(name, 2 * n, control_dim, first_order,
                                                       std::move(analytic_jacobian));
  SymplecticSystem::Acceleration a = [accel](const Vector& p, const Vector& v, const ControlVector& u,
                                             double t) -> Vector { return accel(p, v, u, t); };
  return SymplecticSystem(std::move(name), position_dim, position_dim, control_dim, std::move(a),
                          std::move(controlled));
}

}  // namespace octrl
