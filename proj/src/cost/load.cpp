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

#include "octrl/cost/load.hpp"

#include "octrl/core/errors.hpp"

namespace octrl {
namespace {

Matrix symmetric(io::SectionReader& r, const char* key, Eigen::Index n) {
  Matrix M = r.matrix(key, n, n);
  if (!(M - M.transpose()).isZero(1e-12 * (1.0 + M.cwiseAbs().maxCoeff()))) {
    throw ValidationError(r.location(key), "weight matrix must be symmetric", r.line(key));
  }
  return M;
}

Matrix optional_symmetric(io::SectionReader& r, const char* key, Eigen::Index n, bool required) {
  if (!required && !r.has(key)) return Matrix::Zero(n, n);
  return symmetric(r, key, n);
}

Vector vector_or_zero(io::SectionReader& r, const char* key, Eigen::Index n) {
  return r.optional_vector(key, n).value_or(Vector::Zero(n));
}

StateTrajectory reference_rows(io::SectionReader& r, const char* key, const Vector& times, Eigen::Index dim,
                               InterpolationMode mode) {
  const Matrix rows = r.matrix(key, times.size(), dim);
  StateTrajectory ref(mode);
  for (Eigen::Index k = 0; k < times.size(); ++k) ref.push_back(times(k), rows.row(k).transpose());
  return ref;
}

}  // namespace

ActivationWindow read_activation(io::SectionReader& reader) {
  ActivationWindow w;
  w.t_on = reader.number("t_on", w.t_on);
  w.t_off = reader.number("t_off", w.t_off);
  if (!(w.t_on < w.t_off)) {
    throw ValidationError(reader.location(reader.has("t_off") ? "t_off" : "t_on"), "requires t_on < t_off",
                          reader.line(reader.has("t_off") ? "t_off" : "t_on"));
  }
  return w;
}

CostFunction load_costfunction(const io::IniDocument& doc, Eigen::Index nx, Eigen::Index nu) {
  CostFunction cf(nx, nu);
  for (const io::IniSection* section : doc.with_prefix("cost")) {
    io::SectionReader r(*section);
    const std::string kind = r.text("kind");
    const std::string phase = r.text("phase", "intermediate");
    if (phase != "intermediate" && phase != "final") {
      throw ValidationError(r.location("phase"), "expected 'intermediate' or 'final', got '" + phase + "'",
                            r.line("phase"));
    }
    const bool final_phase = phase == "final";
    const ActivationWindow window = read_activation(r);

    CostFunction::TermPtr term;
    if (kind == "quadratic") {
      Matrix Q = symmetric(r, "Q", nx);
      Matrix R = optional_symmetric(r, "R", nu, !final_phase);
      term = std::make_shared<QuadraticTerm>(std::move(Q), std::move(R), vector_or_zero(r, "x_ref", nx),
                                             vector_or_zero(r, "u_ref", nu), window);
    } else if (kind == "linear") {
      Vector a = r.vector("a", nx);
      Vector b = final_phase ? vector_or_zero(r, "b", nu) : r.vector("b", nu);
      term = std::make_shared<LinearTerm>(std::move(a), std::move(b), window);
    } else if (kind == "mixed") {
      term = std::make_shared<MixedTerm>(r.matrix("P", nu, nx), vector_or_zero(r, "x_ref", nx),
                                         vector_or_zero(r, "u_ref", nu), window);
    } else if (kind == "quad_tracking") {
      Matrix Q = symmetric(r, "Q", nx);
      Matrix R = symmetric(r, "R", nu);
      const Vector times = r.vector("times");
      for (Eigen::Index k = 1; k < times.size(); ++k) {
        if (!(times(k) > times(k - 1))) {
          throw ValidationError(r.location("times"), "must be strictly increasing", r.line("times"));
        }
      }
      if (times.size() == 0) throw ValidationError(r.location("times"), "must not be empty", r.line("times"));
      StateTrajectory x_ref = reference_rows(r, "x_ref", times, nx, InterpolationMode::kLinear);
      ControlTrajectory u_ref = reference_rows(r, "u_ref", times, nu, InterpolationMode::kZeroOrderHold);
      term = std::make_shared<QuadTrackingTerm>(std::move(Q), std::move(R), std::move(x_ref), std::move(u_ref),
                                                window);
    } else if (kind == "state_barrier") {
      Vector lb = r.vector("lb", nx);
      Vector ub = r.vector("ub", nx);
      if ((lb.array() > ub.array()).any()) {
        throw ValidationError(r.location("ub"), "lower bound exceeds upper bound", r.line("ub"));
      }
      const double alpha = r.number("alpha");
      if (!(alpha > 0.0)) throw ValidationError(r.location("alpha"), "must be > 0", r.line("alpha"));
      term = std::make_shared<StateBarrierTerm>(std::move(lb), std::move(ub), alpha, nu, window);
    } else {
      throw ValidationError(r.location("kind"), "unknown cost term kind '" + kind + "'", r.line("kind"));
    }
    r.finish();

    if (final_phase) {
      if (term->depends_on_control()) {
        throw ValidationError(section->name + ".phase", "final terms must not weight the control",
                              r.line("phase"));
      }
      cf.add_final(std::move(term));
    } else {
      cf.add_intermediate(std::move(term));
    }
  }
  return cf;
}

}  // namespace octrl
