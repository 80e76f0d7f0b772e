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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "octrl/core/errors.hpp"
#include "octrl/lq/algebraic_riccati.hpp"
#include "octrl/lq/fhdtlqr.hpp"
#include "octrl/lq/gn_riccati_solver.hpp"
#include "support/oracles.hpp"
#include "support/util.hpp"

namespace octrl {
namespace {

using testing::max_abs;
using testing::vec;

Matrix mat(Eigen::Index r, Eigen::Index c, std::initializer_list<double> v) {
  Matrix M(r, c);
  auto it = v.begin();
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) M(i, j) = *it++;
  return M;
}

// Dense solution of an LQOCProblem started from dx_0 = x0: eliminate the states, then solve the
// normal equations of the quadratic in the stacked controls.
struct DenseSolution {
  std::vector<Vector> du;
  std::vector<Vector> dx;
  double value = 0.0;
};

DenseSolution dense_solve(const LQOCProblem& p, const Vector& x0) {
  const auto N = static_cast<std::size_t>(p.N);
  const Eigen::Index nx = p.Q[0].rows(), nu = p.R[0].rows();
  const Eigen::Index nz = nu * p.N;
  // dx_k = M[k] z + c[k], du_k = E[k] z
  std::vector<Matrix> M(N + 1), E(N);
  std::vector<Vector> c(N + 1);
  M[0] = Matrix::Zero(nx, nz);
  c[0] = x0;
  for (std::size_t k = 0; k < N; ++k) {
    E[k] = Matrix::Zero(nu, nz);
    E[k].block(0, static_cast<Eigen::Index>(k) * nu, nu, nu).setIdentity();
    M[k + 1] = p.A[k] * M[k] + p.B[k] * E[k];
    c[k + 1] = p.A[k] * c[k] + p.d[k];
  }
  Matrix H = Matrix::Zero(nz, nz);
  Vector g = Vector::Zero(nz);
  double c0 = 0.0;
  for (std::size_t k = 0; k <= N; ++k) {
    H += M[k].transpose() * p.Q[k] * M[k];
    g += M[k].transpose() * (p.q_x[k] + p.Q[k] * c[k]);
    c0 += p.q_x[k].dot(c[k]) + 0.5 * c[k].dot(p.Q[k] * c[k]);
    if (k == N) break;
    H += E[k].transpose() * p.R[k] * E[k];
    const Matrix cross = E[k].transpose() * p.P[k] * M[k];
    H += cross + cross.transpose();
    g += E[k].transpose() * (p.q_u[k] + p.P[k] * c[k]);
  }
  const Vector z = H.ldlt().solve(-g);
  DenseSolution out;
  out.value = 0.5 * z.dot(H * z) + g.dot(z) + c0;
  for (std::size_t k = 0; k <= N; ++k) {
    out.dx.push_back(M[k] * z + c[k]);
    if (k < N) out.du.push_back(E[k] * z);
  }
  return out;
}

LQOCProblem random_problem(std::mt19937& rng, int N, Eigen::Index nx, Eigen::Index nu) {
  auto p = LQOCProblem::zeros(N, nx, nu);
  for (int k = 0; k <= N; ++k) {
    const auto i = static_cast<std::size_t>(k);
    p.Q[i] = testing::random_spd(rng, nx, 0.1);
    p.q_x[i] = testing::random_vector(rng, nx, -1, 1);
    if (k == N) break;
    p.A[i] = Matrix::Identity(nx, nx) + 0.1 * testing::random_matrix(rng, nx, nx);
    p.B[i] = testing::random_matrix(rng, nx, nu);
    p.R[i] = testing::random_spd(rng, nu, 0.5);
    p.P[i] = 0.05 * testing::random_matrix(rng, nu, nx);
    p.q_u[i] = testing::random_vector(rng, nu, -1, 1);
    p.d[i] = testing::random_vector(rng, nx, -0.5, 0.5);
  }
  return p;
}

TEST(SolveCare, ScalarIntegrator) {
  const auto s = solve_care(mat(1, 1, {0}), mat(1, 1, {1}), mat(1, 1, {1}), mat(1, 1, {1}));
  EXPECT_NEAR(s.P(0, 0), 1.0, 1e-8);
  EXPECT_NEAR(s.K(0, 0), 1.0, 1e-8);
  EXPECT_LT(s.residual, 1e-10);
}

TEST(SolveCare, DoubleIntegratorClosedForm) {
  const auto s = solve_care(mat(2, 2, {0, 1, 0, 0}), mat(2, 1, {0, 1}), Matrix::Identity(2, 2), mat(1, 1, {1}));
  const double r3 = std::sqrt(3.0);
  EXPECT_LT(max_abs(s.P - mat(2, 2, {r3, 1, 1, r3})), 1e-8);
  EXPECT_LT(max_abs(s.K - mat(1, 2, {1, r3})), 1e-8);
}

TEST(SolveCare, RandomSystemsStabilized) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix A = testing::random_matrix(rng, 3, 3);
    const Matrix B = testing::random_matrix(rng, 3, 2);
    const Matrix Q = testing::random_spd(rng, 3, 0.5);
    const Matrix R = testing::random_spd(rng, 2, 0.5);
    const auto s = solve_care(A, B, Q, R);
    EXPECT_LT(testing::care_residual_oracle(A, B, Q, R, s.P), 1e-8);
    EXPECT_LT(testing::max_real_eigenvalue(A - B * s.K), 0.0);
    EXPECT_LT(max_abs(s.P - s.P.transpose()), 1e-12);
    EXPECT_NEAR(care_residual(A, B, Q, R, s.P), s.residual, 1e-12);
  }
}

// Large B R^-1 B' makes the flow stiff; a plain care_dt step would overshoot and blow up.
TEST(SolveCare, StiffScalar) {
  const double a = -1, b = 30, q = 1, r = 0.01;
  const double w = b * b / r;
  const auto s = solve_care(mat(1, 1, {a}), mat(1, 1, {b}), mat(1, 1, {q}), mat(1, 1, {r}));
  EXPECT_NEAR(s.P(0, 0), (a + std::sqrt(a * a + w * q)) / w, 1e-12);
}

TEST(SolveCare, Faults) {
  EXPECT_THROW(solve_care(mat(1, 1, {0}), mat(1, 1, {1}), mat(1, 1, {1}), mat(1, 1, {0})), SingularityFault);
  // unstable and uncontrollable: the Riccati flow grows without bound
  RiccatiSettings s;
  s.max_iters = 20000;
  EXPECT_THROW(solve_care(mat(1, 1, {1}), mat(1, 1, {0}), mat(1, 1, {1}), mat(1, 1, {1}), s), ConvergenceFault);
  EXPECT_THROW(solve_care(mat(2, 2, {0, 1, 0, 0}), mat(1, 1, {1}), mat(1, 1, {1}), mat(1, 1, {1})),
               ConfigurationError);
}

TEST(SolveDare, ScalarGoldenRatio) {
  const auto s = solve_dare(mat(1, 1, {1}), mat(1, 1, {1}), mat(1, 1, {1}), mat(1, 1, {1}));
  const double phi = (1 + std::sqrt(5.0)) / 2;
  EXPECT_NEAR(s.P(0, 0), phi, 1e-9);
  EXPECT_NEAR(s.K(0, 0), phi / (1 + phi), 1e-9);
  EXPECT_GT(s.iterations, 0);
}

TEST(SolveDare, RandomSystemsStabilized) {
  std::mt19937 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix A = 1.2 * testing::random_matrix(rng, 3, 3);
    const Matrix B = testing::random_matrix(rng, 3, 2);
    const Matrix Q = testing::random_spd(rng, 3, 0.5);
    const Matrix R = testing::random_spd(rng, 2, 0.5);
    const auto s = solve_dare(A, B, Q, R);
    EXPECT_LT(testing::dare_residual_oracle(A, B, Q, R, s.P), 1e-8);
    EXPECT_LT(testing::spectral_radius(A - B * s.K), 1.0);
  }
}

TEST(SolveDare, NonStabilizableFails) {
  RiccatiSettings s;
  s.max_iters = 10000;
  EXPECT_THROW(solve_dare(mat(1, 1, {2}), mat(1, 1, {0}), mat(1, 1, {1}), mat(1, 1, {1}), s), Error);
}

TEST(SolveFhdtlqr, SingleStage) {
  const Matrix A = mat(2, 2, {1, 0.1, 0, 1}), B = mat(2, 1, {0, 0.1}), Qf = mat(2, 2, {3, 1, 1, 2});
  const Matrix R = mat(1, 1, {0.5});
  const auto s = solve_fhdtlqr({A}, {B}, {Matrix::Identity(2, 2)}, {R}, {}, Qf);
  ASSERT_EQ(s.K.size(), 1u);
  ASSERT_EQ(s.S.size(), 2u);
  const Matrix K = (R + B.transpose() * Qf * B).inverse() * B.transpose() * Qf * A;
  EXPECT_LT(max_abs(s.K[0] - K), 1e-14);
  EXPECT_EQ(s.S[1], Qf);
}

TEST(SolveFhdtlqr, LongHorizonApproachesDare) {
  const Matrix A = mat(2, 2, {1, 0.1, 0, 1}), B = mat(2, 1, {0.005, 0.1});
  const Matrix Q = Matrix::Identity(2, 2), R = mat(1, 1, {0.1});
  const int N = 500;
  const auto s = solve_fhdtlqr(std::vector<Matrix>(N, A), std::vector<Matrix>(N, B), std::vector<Matrix>(N, Q),
                               std::vector<Matrix>(N, R), {}, Matrix::Zero(2, 2));
  const auto inf = solve_dare(A, B, Q, R);
  EXPECT_LT(max_abs(s.K.front() - inf.K), 1e-8);
  EXPECT_LT(max_abs(s.S.front() - inf.P), 1e-8);
}

TEST(SolveFhdtlqr, ZeroCostGivesZeroGainAndSymmetricS) {
  std::mt19937 rng(5);
  const int N = 10;
  std::vector<Matrix> A, B, Q, R;
  for (int k = 0; k < N; ++k) {
    A.push_back(testing::random_matrix(rng, 3, 3));
    B.push_back(testing::random_matrix(rng, 3, 2));
    Q.push_back(Matrix::Zero(3, 3));
    R.push_back(testing::random_spd(rng, 2, 0.1));
  }
  const auto zero = solve_fhdtlqr(A, B, Q, R, {}, Matrix::Zero(3, 3));
  for (const auto& K : zero.K) EXPECT_EQ(K, Matrix::Zero(2, 3));
  for (int k = 0; k < N; ++k) Q[static_cast<std::size_t>(k)] = testing::random_spd(rng, 3, 0.1);
  const auto s = solve_fhdtlqr(A, B, Q, R, {}, testing::random_spd(rng, 3, 0.1));
  for (const auto& S : s.S) EXPECT_EQ(S, S.transpose());
}

TEST(SolveFhdtlqr, FeedbackMatchesDenseOracle) {
  std::mt19937 rng(8);
  const int N = 12;
  auto p = random_problem(rng, N, 3, 2);
  for (auto& v : p.q_x) v.setZero();
  for (auto& v : p.q_u) v.setZero();
  for (auto& v : p.d) v.setZero();
  const Vector x0 = testing::random_vector(rng, 3, -1, 1);
  const std::vector<Matrix> Qs(p.Q.begin(), p.Q.end() - 1);
  const auto s = solve_fhdtlqr(p.A, p.B, Qs, p.R, p.P, p.Q.back());
  const auto dense = dense_solve(p, x0);
  Vector x = x0;
  for (std::size_t k = 0; k < s.K.size(); ++k) {
    const Vector u = -s.K[k] * x;
    EXPECT_LT(max_abs(dense.du[k] - u), 1e-9);
    x = p.A[k] * x + p.B[k] * u;
  }
  // the LQOC model carries a 1/2 on the quadratic terms
  EXPECT_NEAR(x0.dot(s.S[0] * x0), 2 * dense.value, 1e-9);
}

TEST(GnRiccati, StationaryProblemGivesZeroStep) {
  std::mt19937 rng(9);
  auto p = random_problem(rng, 8, 2, 1);
  for (auto& v : p.q_x) v.setZero();
  for (auto& v : p.q_u) v.setZero();
  for (auto& v : p.d) v.setZero();
  const auto s = gn_riccati_solve(p);
  for (const auto& du : s.du) EXPECT_EQ(max_abs(du), 0.0);
  for (const auto& dx : s.dx) EXPECT_EQ(max_abs(dx), 0.0);
  EXPECT_EQ(s.expected_decrease(), 0.0);
}

TEST(GnRiccati, ScalarGradientStep) {
  auto p = LQOCProblem::zeros(1, 1, 1);
  p.R[0] = mat(1, 1, {1});
  p.q_u[0] = vec({1});
  const auto s = gn_riccati_solve(p);
  EXPECT_DOUBLE_EQ(s.du[0](0), -1.0);
  EXPECT_DOUBLE_EQ(s.expected_decrease(), 0.5);
}

TEST(GnRiccati, MatchesDenseOracle) {
  std::mt19937 rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_problem(rng, 15, 3, 2);
    const auto s = gn_riccati_solve(p);
    const auto dense = dense_solve(p, Vector::Zero(3));
    for (std::size_t k = 0; k < s.du.size(); ++k) EXPECT_LT(max_abs(s.du[k] - dense.du[k]), 1e-9);
    for (std::size_t k = 0; k < s.dx.size(); ++k) EXPECT_LT(max_abs(s.dx[k] - dense.dx[k]), 1e-9);
    EXPECT_NEAR(s.dV1 + s.dV2, dense.value, 1e-9 * (1 + std::abs(dense.value)));
    EXPECT_EQ(s.max_lambda, 0.0);
  }
}

TEST(GnRiccati, ForwardPassClosesDefects) {
  std::mt19937 rng(11);
  const auto p = random_problem(rng, 20, 2, 1);
  const auto s = gn_riccati_solve(p);
  EXPECT_EQ(s.dx[0], Vector::Zero(2));
  for (std::size_t k = 0; k < s.du.size(); ++k) {
    EXPECT_LT(max_abs(s.dx[k + 1] - (p.A[k] * s.dx[k] + p.B[k] * s.du[k] + p.d[k])), 1e-14);
  }
}

TEST(GnRiccati, GainIsNegatedFhdtlqrGain) {
  std::mt19937 rng(12);
  const auto p = random_problem(rng, 10, 3, 2);
  const auto s = gn_riccati_solve(p);
  const std::vector<Matrix> Qs(p.Q.begin(), p.Q.end() - 1);
  const auto f = solve_fhdtlqr(p.A, p.B, Qs, p.R, p.P, p.Q.back());
  for (std::size_t k = 0; k < s.K.size(); ++k) EXPECT_LT(max_abs(s.K[k] + f.K[k]), 1e-10);
}

TEST(GnRiccati, Regularization) {
  auto p = LQOCProblem::zeros(3, 1, 1);
  for (auto& R : p.R) R = mat(1, 1, {-0.5});
  const auto s = gn_riccati_solve(p);
  EXPECT_DOUBLE_EQ(s.max_lambda, 1.0);
  for (auto& R : p.R) R = mat(1, 1, {-1e7});
  try {
    gn_riccati_solve(p);
    ADD_FAILURE() << "expected RegularizationFault";
  } catch (const RegularizationFault& e) {
    EXPECT_EQ(e.stage(), 2);
  }
}

TEST(GnRiccati, InvalidShapes) {
  auto p = LQOCProblem::zeros(3, 2, 1);
  p.d.pop_back();
  EXPECT_THROW(gn_riccati_solve(p), ConfigurationError);
  EXPECT_THROW(LQOCProblem::zeros(0, 2, 1), ConfigurationError);
}

}  // namespace
}  // namespace octrl
