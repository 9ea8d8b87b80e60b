// Copyright 2026 The opspread Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Test-side reference implementations, written independently of the library code paths.

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "opspread/core.hpp"

namespace opspread::testing {

using cd = std::complex<double>;

/// Kronecker product of two dense matrices.
inline MatrixXcd kron(const MatrixXcd &a, const MatrixXcd &b) {
    MatrixXcd k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return k;
}

/// Clock-and-shift matrix built from the shift X and clock Z: sigma_a = X^{a'} Z^{a''}.
inline MatrixXcd clock_shift(int ap, int app, int q) {
    MatrixXcd x = MatrixXcd::Zero(q, q), z = MatrixXcd::Zero(q, q);
    for (int m = 0; m < q; ++m) {
        x((m + 1) % q, m) = 1;
        z(m, m) = std::polar(1.0, 2 * M_PI * m / q);
    }
    MatrixXcd r = MatrixXcd::Identity(q, q);
    for (int i = 0; i < ap; ++i) r = x * r;
    for (int i = 0; i < app; ++i) r = r * z;
    return r;
}

/// Sigma_a for a flattened pair label.
inline MatrixXcd pair_matrix(int a, int q) {
    const int q2 = q * q;
    const int ax = a / q2, ay = a % q2;
    return kron(clock_shift(ax / q, ax % q, q), clock_shift(ay / q, ay % q, q));
}

/// Phase from Sigma_a Sigma_b = -phi Sigma_b Sigma_a.
inline cd phi_from_matrices(int a, int b, int q) {
    const MatrixXcd sa = pair_matrix(a, q), sb = pair_matrix(b, q);
    const MatrixXcd lhs = sa * sb, rhs = sb * sa;
    return -(rhs.adjoint() * lhs).trace() / double(q * q);
}

/// Exact 2x2 analysis of the order-0 transfer problem, built from the rates by hand.
struct Order0 {
    double v, d;
};

inline Order0 order0_two_state(double t1, double tx, double tp, double tm, double t11, int q) {
    const double q2 = q * q;
    Eigen::Matrix2d d, dp;
    d << 0, t1, 0, tx + tp;
    dp << (tx + (q2 - 1) * tm) / q2, 0, (t1 + tp + (q2 - 1) * (t11 + tm)) / q2, 0;
    const Eigen::Matrix2d m = d + dp;
    // Stationary vector of a 2x2 column-stochastic matrix.
    const double a = m(1, 0), b = m(0, 1);
    Eigen::Vector2d v(b / (a + b), a / (a + b));
    const double d11 = dp.colwise().sum() * v;
    // Second eigenpair: eigenvalue 1 - a - b, right eigenvector (1, -1), left eigenvector (a, -b)/(a+b).
    const double d2 = 1 - a - b;
    const Eigen::Vector2d r2(1, -1);
    const Eigen::Vector2d l2 = Eigen::Vector2d(a, -b) / (a + b);
    const double d12 = Eigen::Vector2d::Ones().dot(dp * r2);
    const double d21 = l2.dot(dp * v);
    return {1 - 2 * d11, 4 * d11 * (1 - d11) + 8 * d12 * d21 / (1 - d2)};
}

}  // namespace opspread::testing
