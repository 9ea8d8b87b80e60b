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

#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/LU>

#include "opspread/core.hpp"
#include "opspread/ensembles.hpp"
#include "opspread/growth.hpp"

namespace opspread {

/// Transfer matrices of the order-n right-propagating densities.
///
/// Spinor layout: component index = parity * 2^n + config, where parity 0 is the even-offset half,
/// parity 1 the odd-offset half, and bit j-1 of config is the binary value j sites behind the front.
template <typename Scalar = double>
struct TransferPair {
    int n = 0;
    int q = 2;
    TransitionRates<Scalar> rates;
    MatrixX<Scalar> d_matrix;
    MatrixX<Scalar> dprime_matrix;

    Eigen::Index dim() const { return d_matrix.rows(); }
    MatrixX<Scalar> total() const { return d_matrix + dprime_matrix; }
};

template <typename Scalar = double>
struct StationaryPair {
    VectorX<Scalar> v1;
    VectorX<Scalar> v1_tilde;
    Scalar d11_prime = 0;
};

/// Maximally random single-site weight: 1/q^2 for I, (q^2-1)/q^2 for X.
template <typename Scalar>
Scalar r_infinity(int b, int q) {
    const Scalar q2 = ipow<Scalar>(q, 2);
    return b == kI ? 1 / q2 : (q2 - 1) / q2;
}

template <typename Scalar>
TransferPair<Scalar> build_transfer(const TransitionRates<Scalar> &r, int n) {
    require(n >= 0 && n % 2 == 0, "build_transfer: order must be even and >= 0");
    require(n <= 12, "build_transfer: order must be <= 12");
    const int q = r.q;
    const Eigen::Matrix<Scalar, 4, 4> t = rate_table(r);
    auto T = [&](int il, int ir, int ol, int orr) { return t(pair_code(ol, orr), pair_code(il, ir)); };
    const Eigen::Index N = Eigen::Index{1} << n;
    const int half = n / 2;

    TransferPair<Scalar> tp;
    tp.n = n;
    tp.q = q;
    tp.rates = r;
    tp.d_matrix = MatrixX<Scalar>::Zero(2 * N, 2 * N);
    tp.dprime_matrix = MatrixX<Scalar>::Zero(2 * N, 2 * N);

    // Site arrays are 1-based; slot n+1 holds the closure site.
    std::vector<int> a(n + 2), p(n + 2);
    for (Eigen::Index pc = 0; pc < N; ++pc) {
        for (int j = 1; j <= n; ++j) p[j] = static_cast<int>((pc >> (j - 1)) & 1);
        for (Eigen::Index ac = 0; ac < N; ++ac) {
            for (int j = 1; j <= n; ++j) a[j] = static_cast<int>((ac >> (j - 1)) & 1);

            // Even half from odd half: the front gate keeps X I in place.
            Scalar w = T(kX, kI, kX, kI);
            for (int k = 1; k <= half; ++k) w *= T(a[2 * k], a[2 * k - 1], p[2 * k], p[2 * k - 1]);
            tp.d_matrix(pc, N + ac) += w;

            for (int an1 = kI; an1 <= kX; ++an1) {
                a[n + 1] = an1;
                const Scalar ra = r_infinity<Scalar>(an1, q);
                // Even half from even half two sites ahead: the front gate moves X back by one.
                Scalar w2 = ra * T(a[1], kX, kX, kI);
                for (int k = 1; k <= half; ++k) w2 *= T(a[2 * k + 1], a[2 * k], p[2 * k], p[2 * k - 1]);
                tp.dprime_matrix(pc, ac) += w2;
            }

            for (int pn1 = kI; pn1 <= kX; ++pn1) {
                p[n + 1] = pn1;
                // Odd half from odd half: the front advances by one.
                Scalar w3 = T(kX, kI, p[1], kX);
                for (int k = 1; k <= half; ++k) w3 *= T(a[2 * k], a[2 * k - 1], p[2 * k + 1], p[2 * k]);
                tp.d_matrix(N + pc, N + ac) += w3;

                for (int an1 = kI; an1 <= kX; ++an1) {
                    a[n + 1] = an1;
                    Scalar w4 = r_infinity<Scalar>(an1, q) * T(a[1], kX, p[1], kX);
                    for (int k = 1; k <= half; ++k) w4 *= T(a[2 * k + 1], a[2 * k], p[2 * k + 1], p[2 * k]);
                    tp.dprime_matrix(N + pc, ac) += w4;
                }
            }
        }
    }
    return tp;
}

template <typename Scalar>
StationaryPair<Scalar> stationary(const TransferPair<Scalar> &tp) {
    using std::abs;
    const Eigen::Index dim = tp.dim();
    const MatrixX<Scalar> m = tp.total();
    const Scalar tol = Scalar(1e-12);
    StationaryPair<Scalar> sp;
    sp.v1_tilde = VectorX<Scalar>::Ones(dim);

    auto residual = [&](const VectorX<Scalar> &v) { return (m * v - v).cwiseAbs().maxCoeff(); };

    // Bordered system [[I - M, 1], [1^T, 0]] [V; mu] = [0; 1].
    MatrixX<Scalar> a = MatrixX<Scalar>::Zero(dim + 1, dim + 1);
    a.topLeftCorner(dim, dim) = MatrixX<Scalar>::Identity(dim, dim) - m;
    a.topRightCorner(dim, 1).setOnes();
    a.bottomLeftCorner(1, dim).setOnes();
    VectorX<Scalar> rhs = VectorX<Scalar>::Zero(dim + 1);
    rhs[dim] = 1;
    Eigen::FullPivLU<MatrixX<Scalar>> lu(a);
    lu.setThreshold(Scalar(1e-13));
    VectorX<Scalar> v;
    if (lu.isInvertible()) {
        VectorX<Scalar> x = lu.solve(rhs);
        x += lu.solve(rhs - a * x);
        v = x.head(dim);
    }
    if (v.size() == 0 || !v.allFinite() || residual(v) > tol) {
        // Degenerate unit eigenvalue: lazy power iteration converges to a fixed point.
        v = VectorX<Scalar>::Constant(dim, Scalar(1) / Scalar(dim));
        int it = 0;
        for (; it < 100000 && residual(v) > tol; ++it) v = (v + m * v) / 2;
        if (residual(v) > tol) throw NumericalError("stationary: fixed-point iteration did not converge");
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (v[i] < -Scalar(1e-10)) throw NumericalError("stationary: stationary vector has a negative component");
        if (v[i] < 0) v[i] = 0;
    }
    v /= v.sum();
    sp.v1 = v;
    sp.d11_prime = sp.v1_tilde.dot(tp.dprime_matrix * v);
    return sp;
}

template <typename Scalar>
Scalar butterfly_velocity(const TransferPair<Scalar> &, const StationaryPair<Scalar> &sp) {
    const Scalar v = 1 - 2 * sp.d11_prime;
    if (v < -Scalar(1e-10) || v > 1 + Scalar(1e-10))
        throw EnsembleValidityError("butterfly_velocity: result outside [0, 1]");
    return v;
}

/// Resolvent form of the diffusion constant; valid without a complete eigenbasis.
template <typename Scalar>
Scalar diffusion_constant(const TransferPair<Scalar> &tp, const StationaryPair<Scalar> &sp) {
    if (tp.rates.is_trivial()) return 0;
    const Eigen::Index dim = tp.dim();
    const MatrixX<Scalar> &dp = tp.dprime_matrix;
    const VectorX<Scalar> &v = sp.v1;
    const VectorX<Scalar> &ones = sp.v1_tilde;
    // G = (I - M + V 1^T)^{-1} - V 1^T, using M V = V.
    const MatrixX<Scalar> a = MatrixX<Scalar>::Identity(dim, dim) - tp.total() + v * ones.transpose();
    Eigen::PartialPivLU<MatrixX<Scalar>> lu(a);
    if (!(lu.rcond() > Scalar(1e-13)))
        throw NumericalError("diffusion_constant: resolvent is singular (degenerate unit eigenvalue)");
    const VectorX<Scalar> y = dp * v;
    const VectorX<Scalar> gy = lu.solve(y) - v * ones.dot(y);
    const Scalar d11 = sp.d11_prime;
    const Scalar d = 4 * d11 * (1 - d11) + 8 * ones.dot(dp * gy);
    if (d < -Scalar(1e-10)) throw NumericalError("diffusion_constant: negative result");
    return d < 0 ? Scalar(0) : d;
}

template <typename Scalar = double>
struct DriftDiffusion {
    Scalar v_b = 0;
    Scalar d = 0;
};

/// Order-n butterfly velocity and diffusion constant.
template <typename Scalar>
DriftDiffusion<Scalar> drift_diffusion(const TransitionRates<Scalar> &r, int n) {
    const TransferPair<Scalar> tp = build_transfer(r, n);
    const StationaryPair<Scalar> sp = stationary(tp);
    return {butterfly_velocity(tp, sp), diffusion_constant(tp, sp)};
}

/// Order-0 results as rational functions of T1 and q.
template <typename Scalar>
DriftDiffusion<Scalar> closed_form_n0(const TransitionRates<Scalar> &r) {
    const Scalar q2 = ipow<Scalar>(r.q, 2);
    const Scalar t1 = r.t1;
    const Scalar s = q2 - 1 + (q2 + 1) * t1;
    return {(q2 - 1) * (1 - t1) / s, 4 * q2 * (q2 + 1) * t1 * (1 - t1) * (q2 - 1 + t1) / (s * s * s)};
}

/// Order-0 Poisson results in terms of a = q^6 - 9 q^2 and the |alpha| polynomial b.
template <typename Scalar>
DriftDiffusion<Scalar> poisson_closed_form(int q, Scalar abs_alpha) {
    require(q >= 2, "poisson_closed_form: q must be >= 2");
    require(abs_alpha >= Scalar(0) && abs_alpha <= Scalar(1), "poisson_closed_form: |alpha| must lie in [0, 1]");
    const int qq = q * q;
    const Scalar q2 = qq, q6 = q2 * q2 * q2;
    const Scalar a2 = abs_alpha * abs_alpha;
    const Scalar a = q6 - 9 * q2;
    const Scalar b = (q6 - 5 * q2) * a2 * a2 - (6 + 2 * q2) * ipow(a2, qq - 1) + (6 - 2 * q2) * ipow(a2, qq + 1);
    const Scalar v = (q2 - 1) / (q2 + 1) * (a - b) / (a + b);
    const Scalar d = 4 / ((q2 + 1) * (q2 + 1)) * (a - b) * (b * q2 + a) * (b + a * q2) / ipow(a + b, 3);
    return {v, d};
}

/// q -> infinity limit of poisson_closed_form at fixed |alpha|.
template <typename Scalar>
DriftDiffusion<Scalar> poisson_large_q(Scalar abs_alpha) {
    const Scalar u = ipow(abs_alpha, 4);
    return {(1 - u) / (1 + u), 4 * u * (1 - u) / ipow(1 + u, 3)};
}

/// Order-0 rates per unit rescaled time t' = lambda t as lambda -> 0 (|alpha|^2 = e^{-lambda}).
DriftDiffusion<double> continuous_limit(int q, EnsembleKind kind);

/// Norm of V1^(n) minus its maximally random extension of V1^(n-2).
double eigvec_convergence(const TransitionRates<double> &r, int n);

}  // namespace opspread
