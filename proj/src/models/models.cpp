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

#include "octrl/models/models.hpp"

#include <cmath>

#include "octrl/core/errors.hpp"

namespace octrl::models {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw ConfigurationError(std::string(what) + " must be > 0");
}

void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0)) throw ConfigurationError(std::string(what) + " must be >= 0");
}

void validate(const PendulumParams& p) {
  require_positive(p.m, "pendulum mass m");
  require_positive(p.l, "pendulum length l");
  require_non_negative(p.b, "pendulum damping b");
  require_non_negative(p.g, "pendulum gravity g");
}

StateControlJacobians pendulum_jacobian(const PendulumParams& p, const StateVector& x) {
  const double ml2 = p.m * p.l * p.l;
  StateControlJacobians J{Matrix::Zero(2, 2), Matrix::Zero(2, 1)};
  J.A(0, 1) = 1.0;
  J.A(1, 0) = -p.m * p.g * p.l * std::cos(x(0)) / ml2;
  J.A(1, 1) = -p.b / ml2;
  J.B(1, 0) = 1.0 / ml2;
  return J;
}

}  // namespace

ControlledSystem pendulum(const PendulumParams& p) {
  validate(p);
  auto f = [p](const auto& x, const auto& u, double) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    using std::sin;
    VectorX<S> dx(2);
    dx(0) = x(1);
    dx(1) = (u(0) - S(p.m * p.g * p.l) * sin(x(0)) - S(p.b) * x(1)) / S(p.m * p.l * p.l);
    return dx;
  };
  return make_controlled_system("pendulum", 2, 1, f,
                                [p](const StateVector& x, const ControlVector&, double) {
                                  return pendulum_jacobian(p, x);
                                });
}

SymplecticSystem pendulum_symplectic(const PendulumParams& p) {
  validate(p);
  auto a = [p](const auto& q, const auto& v, const auto& u, double) {
    using S = typename std::decay_t<decltype(q)>::Scalar;
    using std::sin;
    VectorX<S> acc(1);
    acc(0) = (u(0) - S(p.m * p.g * p.l) * sin(q(0)) - S(p.b) * v(0)) / S(p.m * p.l * p.l);
    return acc;
  };
  return make_symplectic_system("pendulum", 1, 1, a, [p](const StateVector& x, const ControlVector&, double) {
    return pendulum_jacobian(p, x);
  });
}

double pendulum_energy(const PendulumParams& p, const StateVector& x) {
  return 0.5 * p.m * p.l * p.l * x(1) * x(1) + p.m * p.g * p.l * (1.0 - std::cos(x(0)));
}

ControlledSystem double_integrator() {
  auto f = [](const auto& x, const auto& u, double) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    VectorX<S> dx(2);
    dx(0) = x(1);
    dx(1) = u(0);
    return dx;
  };
  return make_controlled_system("double_integrator", 2, 1, f, [](const StateVector&, const ControlVector&, double) {
    StateControlJacobians J{Matrix::Zero(2, 2), Matrix::Zero(2, 1)};
    J.A(0, 1) = 1.0;
    J.B(1, 0) = 1.0;
    return J;
  });
}

SymplecticSystem oscillator(double k) {
  require_positive(k, "oscillator stiffness k");
  auto a = [k](const auto& q, const auto&, const auto& u, double) {
    using S = typename std::decay_t<decltype(q)>::Scalar;
    VectorX<S> acc(1);
    acc(0) = S(-k) * q(0) + u(0);
    return acc;
  };
  return make_symplectic_system("oscillator", 1, 1, a, [k](const StateVector&, const ControlVector&, double) {
    StateControlJacobians J{Matrix::Zero(2, 2), Matrix::Zero(2, 1)};
    J.A(0, 1) = 1.0;
    J.A(1, 0) = -k;
    J.B(1, 0) = 1.0;
    return J;
  });
}

double oscillator_energy(double k, const StateVector& x) { return 0.5 * (k * x(0) * x(0) + x(1) * x(1)); }

ControlledSystem planar_quadrotor(const QuadrotorParams& p) {
  require_positive(p.m, "quadrotor mass m");
  require_positive(p.I, "quadrotor inertia I");
  require_positive(p.l, "quadrotor arm length l");
  require_non_negative(p.g, "quadrotor gravity g");
  auto f = [p](const auto& x, const auto& u, double) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    using std::cos;
    using std::sin;
    const S thrust = u(0) + u(1);
    VectorX<S> dx(6);
    dx(0) = x(3);
    dx(1) = x(4);
    dx(2) = x(5);
    dx(3) = -thrust * sin(x(2)) / S(p.m);
    dx(4) = thrust * cos(x(2)) / S(p.m) - S(p.g);
    dx(5) = S(p.l) * (u(0) - u(1)) / S(p.I);
    return dx;
  };
  return make_controlled_system("planar_quadrotor", 6, 2, f,
                                [p](const StateVector& x, const ControlVector& u, double) {
                                  const double thrust = u(0) + u(1);
                                  const double s = std::sin(x(2));
                                  const double c = std::cos(x(2));
                                  StateControlJacobians J{Matrix::Zero(6, 6), Matrix::Zero(6, 2)};
                                  J.A(0, 3) = 1.0;
                                  J.A(1, 4) = 1.0;
                                  J.A(2, 5) = 1.0;
                                  J.A(3, 2) = -thrust * c / p.m;
                                  J.A(4, 2) = -thrust * s / p.m;
                                  J.B(3, 0) = J.B(3, 1) = -s / p.m;
                                  J.B(4, 0) = J.B(4, 1) = c / p.m;
                                  J.B(5, 0) = p.l / p.I;
                                  J.B(5, 1) = -p.l / p.I;
                                  return J;
                                });
}

ControlledSystem linear_system(const Matrix& A, const Matrix& B) {
  if (A.rows() != A.cols() || B.rows() != A.rows() || A.rows() == 0) {
    throw ConfigurationError("linear system: A must be square and B must have as many rows as A");
  }
  auto f = [A, B](const auto& x, const auto& u, double) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    VectorX<S> dx(A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      S acc(0.0);
      for (Eigen::Index j = 0; j < A.cols(); ++j) {
        if (A(i, j) != 0.0) acc = acc + S(A(i, j)) * x(j);
      }
      for (Eigen::Index j = 0; j < B.cols(); ++j) {
        if (B(i, j) != 0.0) acc = acc + S(B(i, j)) * u(j);
      }
      dx(i) = acc;
    }
    return dx;
  };
  return make_controlled_system("linear", static_cast<int>(A.rows()), static_cast<int>(B.cols()), f,
                                [A, B](const StateVector&, const ControlVector&, double) {
                                  return StateControlJacobians{A, B};
                                });
}

const std::vector<ModelCatalogEntry>& catalog() {
  static const std::vector<ModelCatalogEntry> entries = {
      {"pendulum", 2, 1, {{"m", 1.0}, {"l", 1.0}, {"b", 0.1}, {"g", 9.81}}, true, true},
      {"double_integrator", 2, 1, {}, true, false},
      {"oscillator", 2, 1, {{"k", 1.0}}, true, true},
      {"planar_quadrotor", 6, 2, {{"m", 1.0}, {"I", 0.02}, {"l", 0.2}, {"g", 9.81}}, true, false},
  };
  return entries;
}

ControlledSystem make_model(const std::string& name, const std::map<std::string, double>& overrides) {
  const ModelCatalogEntry* entry = nullptr;
  for (const auto& e : catalog()) {
    if (e.name == name) entry = &e;
  }
  if (!entry) throw ConfigurationError("unknown model '" + name + "'");
  std::map<std::string, double> values;
  for (const auto& param : entry->parameters) values[param.name] = param.default_value;
  for (const auto& [key, value] : overrides) {
    if (!values.count(key)) throw ConfigurationError("model '" + name + "' has no parameter '" + key + "'");
    values[key] = value;
  }
  if (name == "pendulum") return pendulum({values["m"], values["l"], values["b"], values["g"]});
  if (name == "double_integrator") return double_integrator();
  if (name == "oscillator") return oscillator(values["k"]).as_controlled_system();
  return planar_quadrotor({values["m"], values["I"], values["l"], values["g"]});
}

}  // namespace octrl::models
