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

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "octrl/core/errors.hpp"
#include "octrl/core/types.hpp"
#include "octrl/diff/dual.hpp"

namespace octrl {

/// Forward-difference Jacobian with per-coordinate step sqrt(eps) * (1 + |x_i|).
template <typename F>
Matrix jacobian_fd(F&& f, const Vector& x) {
  const Vector f0 = f(x);
  Matrix J(f0.size(), x.size());
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = root_eps * (1.0 + std::abs(x(i)));
    xp(i) = x(i) + h;
    const Vector fp = f(xp);
    xp(i) = x(i);
    // Use the step actually representable in floating point.
    const double h_eff = (x(i) + h) - x(i);
    J.col(i) = (fp - f0) / h_eff;
  }
  if (!J.allFinite()) throw NumericalFault("jacobian_fd: non-finite function evaluation");
  return J;
}

/// Seeds `x` as independent dual variables.
inline DualVector seed_duals(const Vector& x) {
  const auto n = static_cast<std::size_t>(x.size());
  DualVector xd(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) xd(i) = Dual1::variable(x(i), static_cast<std::size_t>(i), n);
  return xd;
}

/// Jacobian via forward-mode AD. At non-differentiable points the taken branch's derivative is used.
template <typename F>
Matrix jacobian_ad(F&& f, const Vector& x) {
  const DualVector y = f(seed_duals(x));
  Matrix J(y.size(), x.size());
  for (Eigen::Index r = 0; r < y.size(); ++r) {
    for (Eigen::Index c = 0; c < x.size(); ++c) J(r, c) = y(r).derivative(static_cast<std::size_t>(c));
  }
  return J;
}

/// Value, gradient and Hessian of a scalar function.
struct SecondOrderExpansion {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
  /// max |H - H^T| before symmetrization.
  double asymmetry = 0.0;
};

/// Seeds `x` as second-order dual variables.
inline Dual2Vector seed_dual2(const Vector& x) {
  const auto n = static_cast<std::size_t>(x.size());
  Dual2Vector xd(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    std::vector<Dual1> outer(n, Dual1(0.0));
    outer[idx] = Dual1(1.0);
    xd(i) = Dual2(Dual1::variable(x(i), idx, n), std::move(outer));
  }
  return xd;
}

/// Extracts value/gradient/Hessian from a second-order dual result over `n` seeds.
inline SecondOrderExpansion expand_dual2(const Dual2& y, Eigen::Index n) {
  SecondOrderExpansion out;
  out.value = y.value().value();
  out.gradient = Vector::Zero(n);
  out.hessian = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Dual1 dj = y.derivative(static_cast<std::size_t>(j));
    out.gradient(j) = dj.value();
    for (Eigen::Index i = 0; i < n; ++i) out.hessian(j, i) = dj.derivative(static_cast<std::size_t>(i));
  }
  out.asymmetry = n > 0 ? (out.hessian - out.hessian.transpose()).cwiseAbs().maxCoeff() : 0.0;
  out.hessian = 0.5 * (out.hessian + out.hessian.transpose());
  return out;
}

/// Gradient and symmetrized Hessian by nested (dual-over-dual) forward mode.
template <typename F>
SecondOrderExpansion second_order_ad(F&& f, const Vector& x) {
  return expand_dual2(f(seed_dual2(x)), x.size());
}

template <typename F>
Matrix hessian_ad(F&& f, const Vector& x) {
  return second_order_ad(std::forward<F>(f), x).hessian;
}

}  // namespace octrl
