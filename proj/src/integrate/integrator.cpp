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

#include "octrl/integrate/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "octrl/core/errors.hpp"

namespace octrl {
namespace {

void require_finite_state(const Vector& x, double t) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x(i))) {
      throw NumericalFault("integrator: state component " + std::to_string(i) + " became non-finite at t=" +
                               std::to_string(t),
                           i, t);
    }
  }
}

void check_span(double t0, double t1) {
  if (!(t1 > t0)) {
    throw ConfigurationError("integrator: end time " + std::to_string(t1) + " must exceed start time " +
                             std::to_string(t0));
  }
}

VectorField closed_loop_field(const ControlledSystem& sys) {
  if (!sys.controller()) throw ConfigurationError(sys.name() + ": integration requires an attached controller");
  return [&sys](const Vector& x, double t) { return sys.closed_loop_rhs(x, t); };
}

// Dormand-Prince 5(4) tableau.
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0, kB5 = -2187.0 / 6784.0,
                 kB6 = 11.0 / 84.0;
// b5 - b4 (error weights).
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0, kE5 = -17253.0 / 339200.0,
                 kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

}  // namespace

void IntegratorSettings::validate() const {
  if (!(dt > 0.0)) throw ConfigurationError("integrator: dt must be > 0");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ConfigurationError("integrator: tolerances must be > 0");
  if (max_steps < 1) throw ConfigurationError("integrator: max_steps must be >= 1");
}

SymplecticSystem::SymplecticSystem(std::string name, int position_dim, int velocity_dim, int control_dim,
                                   Acceleration acceleration, ControlledSystem as_controlled)
    : name_(std::move(name)),
      position_dim_(position_dim),
      velocity_dim_(velocity_dim),
      control_dim_(control_dim),
      acceleration_(std::move(acceleration)),
      controlled_(std::move(as_controlled)) {
  if (position_dim_ <= 0 || position_dim_ != velocity_dim_) {
    throw ConfigurationError(name_ + ": symplectic split requires equal positive position/velocity dimensions");
  }
  if (controlled_.state_dim() != position_dim_ + velocity_dim_) {
    throw ConfigurationError(name_ + ": first-order form has inconsistent state dimension");
  }
}

Vector SymplecticSystem::acceleration(const Vector& p, const Vector& v, const ControlVector& u, double t) const {
  Vector a = acceleration_(p, v, u, t);
  if (a.size() != velocity_dim_) throw ConfigurationError(name_ + ": acceleration has wrong dimension");
  return a;
}

Vector euler_step(const VectorField& f, const Vector& x, double t, double h) { return x + h * f(x, t); }

Vector rk4_step(const VectorField& f, const Vector& x, double t, double h) {
  const Vector k1 = f(x, t);
  const Vector k2 = f(x + (0.5 * h) * k1, t + 0.5 * h);
  const Vector k3 = f(x + (0.5 * h) * k2, t + 0.5 * h);
  const Vector k4 = f(x + h * k3, t + h);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

long fixed_step_count(double t0, double t1, double dt) {
  const double ratio = (t1 - t0) / dt;
  return std::max(1L, static_cast<long>(std::ceil(ratio - 1e-7)));
}

StateTrajectory integrate_fixed(const VectorField& f, const StateVector& x0, double t0, double t1,
                                const IntegratorSettings& settings) {
  settings.validate();
  check_span(t0, t1);
  const long n = fixed_step_count(t0, t1, settings.dt);
  if (n > settings.max_steps) {
    throw ConfigurationError("integrator: " + std::to_string(n) + " steps exceed max_steps=" +
                             std::to_string(settings.max_steps));
  }
  const bool euler = settings.scheme == IntegrationScheme::kEuler;
  if (!euler && settings.scheme != IntegrationScheme::kRk4) {
    throw ConfigurationError("integrator: integrate_fixed supports Euler and RK4 only");
  }
  std::vector<double> times;
  std::vector<Vector> states;
  times.reserve(static_cast<std::size_t>(n) + 1);
  states.reserve(static_cast<std::size_t>(n) + 1);
  times.push_back(t0);
  states.push_back(x0);
  Vector x = x0;
  for (long k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * settings.dt;
    const double t_next = (k + 1 == n) ? t1 : t0 + static_cast<double>(k + 1) * settings.dt;
    const double h = t_next - t;
    x = euler ? euler_step(f, x, t, h) : rk4_step(f, x, t, h);
    require_finite_state(x, t_next);
    times.push_back(t_next);
    states.push_back(x);
  }
  return StateTrajectory(std::move(times), std::move(states));
}

StateTrajectory integrate_fixed(const DynamicalSystem& sys, const StateVector& x0, double t0, double t1,
                                const IntegratorSettings& settings) {
  return integrate_fixed([&sys](const Vector& x, double t) { return sys.evaluate(x, t); }, x0, t0, t1, settings);
}

StateTrajectory integrate_fixed(const ControlledSystem& sys, const StateVector& x0, double t0, double t1,
                                const IntegratorSettings& settings) {
  return integrate_fixed(closed_loop_field(sys), x0, t0, t1, settings);
}

StateTrajectory integrate_adaptive(const VectorField& f, const StateVector& x0, double t0, double t1,
                                   const IntegratorSettings& settings, AdaptiveStats* stats) {
  settings.validate();
  check_span(t0, t1);
  const double span = t1 - t0;
  const double h_min = 1e-12 * span;
  AdaptiveStats local;
  std::vector<double> times{t0};
  std::vector<Vector> states{x0};
  Vector x = x0;
  double t = t0;
  double h = std::min(settings.dt, span);
  Vector k1 = f(x, t);
  long attempts = 0;
  while (t < t1) {
    if (++attempts > settings.max_steps) {
      throw ConfigurationError("integrator: adaptive integration exceeded max_steps=" +
                               std::to_string(settings.max_steps));
    }
    bool last = false;
    if (t + h >= t1 || (t1 - (t + h)) < 1e-9 * span) {
      h = t1 - t;
      last = true;
    }
    const Vector k2 = f(x + h * (kA21 * k1), t + kC2 * h);
    const Vector k3 = f(x + h * (kA31 * k1 + kA32 * k2), t + kC3 * h);
    const Vector k4 = f(x + h * (kA41 * k1 + kA42 * k2 + kA43 * k3), t + kC4 * h);
    const Vector k5 = f(x + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4), t + kC5 * h);
    const Vector k6 = f(x + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5), t + h);
    const Vector x_new = x + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    const Vector k7 = f(x_new, t + h);
    const Vector err_vec = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);

    double err = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double scale = settings.abs_tol + settings.rel_tol * std::max(std::abs(x(i)), std::abs(x_new(i)));
      err = std::max(err, std::abs(err_vec(i)) / scale);
    }
    if (!std::isfinite(err)) {
      require_finite_state(x_new, t + h);
      err = std::numeric_limits<double>::infinity();
    }
    const double factor =
        err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -1.0 / 5.0)));
    if (err <= 1.0) {
      t = last ? t1 : t + h;
      x = x_new;
      k1 = k7;
      require_finite_state(x, t);
      times.push_back(t);
      states.push_back(x);
      ++local.accepted_steps;
      if (last) break;
    } else {
      ++local.rejected_steps;
    }
    h *= factor;
    if (h < h_min) {
      throw StiffnessFault("integrator: step size underflow (" + std::to_string(h) + ") at t=" + std::to_string(t),
                           t);
    }
  }
  if (stats) *stats = local;
  return StateTrajectory(std::move(times), std::move(states));
}

StateTrajectory integrate_adaptive(const DynamicalSystem& sys, const StateVector& x0, double t0, double t1,
                                   const IntegratorSettings& settings, AdaptiveStats* stats) {
  return integrate_adaptive([&sys](const Vector& x, double t) { return sys.evaluate(x, t); }, x0, t0, t1, settings,
                            stats);
}

StateTrajectory integrate_adaptive(const ControlledSystem& sys, const StateVector& x0, double t0, double t1,
                                   const IntegratorSettings& settings, AdaptiveStats* stats) {
  return integrate_adaptive(closed_loop_field(sys), x0, t0, t1, settings, stats);
}

StateTrajectory integrate_symplectic(const SymplecticSystem& sys, const StateVector& x0, double t0, double t1,
                                     const IntegratorSettings& settings, const ControlVector& u_in) {
  settings.validate();
  check_span(t0, t1);
  if (x0.size() != sys.state_dim()) throw ConfigurationError(sys.name() + ": initial state has wrong dimension");
  const ControlVector u = u_in.size() == 0 ? ControlVector::Zero(sys.control_dim()) : u_in;
  if (u.size() != sys.control_dim()) throw ConfigurationError(sys.name() + ": control has wrong dimension");
  const long n = fixed_step_count(t0, t1, settings.dt);
  if (n > settings.max_steps) throw ConfigurationError("integrator: step count exceeds max_steps");
  const int np = sys.position_dim();
  std::vector<double> times;
  std::vector<Vector> states;
  times.reserve(static_cast<std::size_t>(n) + 1);
  states.reserve(static_cast<std::size_t>(n) + 1);
  times.push_back(t0);
  states.push_back(x0);
  Vector p = x0.head(np);
  Vector v = x0.tail(np);
  Vector x(2 * np);
  for (long k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * settings.dt;
    const double t_next = (k + 1 == n) ? t1 : t0 + static_cast<double>(k + 1) * settings.dt;
    const double h = t_next - t;
    v += h * sys.acceleration(p, v, u, t);
    p += h * v;
    x << p, v;
    require_finite_state(x, t_next);
    times.push_back(t_next);
    states.push_back(x);
  }
  return StateTrajectory(std::move(times), std::move(states));
}

StateTrajectory integrate(const VectorField& f, const StateVector& x0, double t0, double t1,
                          const IntegratorSettings& settings) {
  switch (settings.scheme) {
    case IntegrationScheme::kEuler:
    case IntegrationScheme::kRk4:
      return integrate_fixed(f, x0, t0, t1, settings);
    case IntegrationScheme::kRk45Adaptive:
      return integrate_adaptive(f, x0, t0, t1, settings);
    case IntegrationScheme::kSymplecticEuler:
      break;
  }
  throw ConfigurationError("integrator: the symplectic scheme needs a SymplecticSystem");
}

ClosedLoopTrajectory simulate_closed_loop(const ControlledSystem& sys, Controller& controller,
                                          const StateVector& x0, double t0, double t1, double control_dt,
                                          const IntegratorSettings& settings) {
  settings.validate();
  check_span(t0, t1);
  if (!(control_dt >= settings.dt)) throw ConfigurationError("simulate: control_dt must be >= integrator dt");
  if (controller.control_dim() != sys.control_dim()) {
    throw ConfigurationError("simulate: controller output dimension does not match the system");
  }
  ClosedLoopTrajectory out;
  out.controls.set_mode(InterpolationMode::kZeroOrderHold);
  out.states.push_back(t0, x0);
  Vector x = x0;
  const long n = fixed_step_count(t0, t1, control_dt);
  for (long k = 0; k < n; ++k) {
    const double ta = t0 + static_cast<double>(k) * control_dt;
    const double tb = (k + 1 == n) ? t1 : t0 + static_cast<double>(k + 1) * control_dt;
    const ControlVector u = controller.compute_control(x, ta);
    out.controls.push_back(ta, u);
    const VectorField f = [&sys, &u](const Vector& xs, double t) { return sys.evaluate_dynamics(xs, u, t); };
    const StateTrajectory seg = integrate(f, x, ta, tb, settings);
    for (std::size_t i = 1; i < seg.size(); ++i) out.states.push_back(seg.time(i), seg[i]);
    x = seg.back();
  }
  return out;
}

}  // namespace octrl
