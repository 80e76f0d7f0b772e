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

// Reference computations used by the tests. Deliberately written without the library's
// solvers so that they can serve as independent checks.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <random>
#include <vector>

namespace octrl::testing {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Matrix exponential by scaling and squaring of a Taylor series, converged to roundoff.
inline Mat expm_series(const Mat& M) {
  const double norm = M.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const Mat S = M / std::pow(2.0, squarings);
  Mat term = Mat::Identity(M.rows(), M.cols());
  Mat sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * S / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-20) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

/// Exact zero-order-hold discretization (e^{A h}, integral of e^{A s} B over [0, h]) from the
/// exponential of the augmented matrix [[A, B], [0, 0]].
inline std::pair<Mat, Mat> zoh_discretize(const Mat& A, const Mat& B, double h) {
  const auto n = A.rows();
  const auto m = B.cols();
  Mat aug = Mat::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = A * h;
  aug.topRightCorner(n, m) = B * h;
  const Mat E = expm_series(aug);
  return {E.topLeftCorner(n, n), E.topRightCorner(n, m)};
}

/// Finite-horizon LQR by backward dynamic programming on
/// sum_k (x'Qx + u'Ru) + x_N' Qf x_N, with x+ = Ad x + Bd u. Returns the optimal open-loop
/// control sequence from x0.
inline std::vector<Vec> lqr_closed_form_controls(const Mat& Ad, const Mat& Bd, const Mat& Q, const Mat& R,
                                                 const Mat& Qf, int N, const Vec& x0) {
  std::vector<Mat> K(static_cast<std::size_t>(N));
  Mat S = Qf;
  for (int k = N - 1; k >= 0; --k) {
    const Mat H = R + Bd.transpose() * S * Bd;
    const Mat G = Bd.transpose() * S * Ad;
    K[static_cast<std::size_t>(k)] = H.ldlt().solve(G);
    S = Q + Ad.transpose() * S * Ad - G.transpose() * K[static_cast<std::size_t>(k)];
    S = 0.5 * (S + S.transpose()).eval();
  }
  std::vector<Vec> u;
  Vec x = x0;
  for (int k = 0; k < N; ++k) {
    u.push_back(-K[static_cast<std::size_t>(k)] * x);
    x = Ad * x + Bd * u.back();
  }
  return u;
}

/// Residual of A'PA - P - A'PB (R + B'PB)^-1 B'PA + Q, infinity norm.
inline double dare_residual_oracle(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& P) {
  const Mat H = R + B.transpose() * P * B;
  const Mat res = A.transpose() * P * A - P - A.transpose() * P * B * H.inverse() * B.transpose() * P * A + Q;
  return res.cwiseAbs().maxCoeff();
}

/// Residual of A'P + PA - P B R^-1 B' P + Q, infinity norm.
inline double care_residual_oracle(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& P) {
  const Mat res = A.transpose() * P + P * A - P * B * R.inverse() * B.transpose() * P + Q;
  return res.cwiseAbs().maxCoeff();
}

inline double spectral_radius(const Mat& M) {
  return Eigen::EigenSolver<Mat>(M, false).eigenvalues().cwiseAbs().maxCoeff();
}

inline double max_real_eigenvalue(const Mat& M) {
  return Eigen::EigenSolver<Mat>(M, false).eigenvalues().real().maxCoeff();
}

inline Mat random_matrix(std::mt19937& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Mat M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = n(rng);
  }
  return M;
}

inline Vec random_vector(std::mt19937& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

/// Symmetric positive definite matrix with eigenvalues bounded below by `floor`.
inline Mat random_spd(std::mt19937& rng, Eigen::Index n, double floor = 0.1) {
  const Mat M = random_matrix(rng, n, n);
  return M.transpose() * M / static_cast<double>(n) + floor * Mat::Identity(n, n);
}

/// Hurwitz matrix: random matrix shifted left of its rightmost eigenvalue.
inline Mat random_hurwitz(std::mt19937& rng, Eigen::Index n) {
  const Mat M = random_matrix(rng, n, n);
  const double shift = max_real_eigenvalue(M) + 0.2 + std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return M - shift * Mat::Identity(n, n);
}

/// Smallest wall time of `reps` calls, in seconds.
template <typename F>
double min_wall_time(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    f();
    const auto stop = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(stop - start).count());
  }
  return best;
}

}  // namespace octrl::testing
