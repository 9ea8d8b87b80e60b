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

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "opspread/core.hpp"

namespace opspread {

/// Single-site generalized Pauli label sigma_a, a = a' q + a''.
struct PauliIndex {
    int a_prime = 0;
    int a_dprime = 0;

    int flat(int q) const { return a_prime * q + a_dprime; }
    bool is_identity() const { return a_prime == 0 && a_dprime == 0; }
    static PauliIndex from_flat(int a, int q);
};

/// Two-site label Sigma_a = sigma_{a_x} (x) sigma_{a_y}, flattened as a_x q^2 + a_y.
struct PairIndex {
    PauliIndex x;
    PauliIndex y;

    int flat(int q) const { return x.flat(q) * q * q + y.flat(q); }
    bool is_identity() const { return x.is_identity() && y.is_identity(); }
    static PairIndex from_flat(int a, int q);
};

/// Integer k (mod q) with phi(a, b) = -omega^k, omega = exp(2 pi i / q).
int phi_exponent(int a, int b, int q);

/// Commutation phase of two pair labels.
std::complex<double> phi(int a, int b, int q);
std::complex<double> phi(const PairIndex &a, const PairIndex &b, int q);

/// Label of the componentwise additive inverse (-a', -a'') mod q.
int pair_negate(int a, int q);

/// Clock-and-shift matrix sum_m omega^{m a''} |m + a'><m|.
MatrixXcd sigma_matrix(const PauliIndex &a, int q);
MatrixXcd sigma_matrix(int a, int q);

/// Averaged pair transition probabilities M[a][p] = <|W_ap|^2>.
template <typename Scalar = double>
struct PairTransitionMatrix {
    int q = 2;
    MatrixX<Scalar> entries;
    /// Number of entries in [-1e-12, 0) that were clamped to zero.
    int clamped = 0;
};

template <typename Scalar>
PairTransitionMatrix<Scalar> pair_transition_matrix(const Coefficients<Scalar> &c) {
    using std::cos;
    using std::sin;
    const int q = c.q;
    require(q >= 2, "pair_transition_matrix: q must be >= 2");
    const int n = q * q * q * q;
    const Scalar norm = Scalar(n - 1);
    const Scalar re_a1 = c.a1.real();
    const Scalar im_a1 = c.a1.imag();
    const Scalar uniform = Scalar(1) - (re_a1 + c.a2 + c.a3) / norm;
    const Scalar two_pi = Scalar(2) * Scalar(EIGEN_PI);

    PairTransitionMatrix<Scalar> out;
    out.q = q;
    out.entries = MatrixX<Scalar>::Zero(n, n);
    out.entries(0, 0) = 1;
    for (int a = 1; a < n; ++a) {
        const int neg = pair_negate(a, q);
        for (int p = 1; p < n; ++p) {
            const Scalar angle = two_pi * Scalar(phi_exponent(a, p, q)) / Scalar(q);
            // phi = -(cos + i sin); Re(A1 conj(phi)) = -(ReA1 cos + ImA1 sin)
            Scalar v = uniform - (re_a1 * cos(angle) + im_a1 * sin(angle));
            if (p == neg) v += c.a2;
            if (p == a) v += c.a3;
            v /= norm;
            if (v < Scalar(0)) {
                if (v < -Scalar(kValidityTol))
                    throw EnsembleValidityError("pair_transition_matrix: negative probability; coefficients outside the allowed region");
                v = 0;
                ++out.clamped;
            }
            out.entries(a, p) = v;
        }
    }
    return out;
}

/// Dense distribution over the q^{2L} Pauli strings of a periodic chain.
/// Site x occupies base-q^2 digit x (site 0 least significant).
std::vector<VectorXd> evolve_full_chain(int q, const Coefficients<double> &coeffs, int L,
                                        const VectorXd &initial, int t_max);

/// Applies the brickwork layer belonging to time step t (t >= 1) in place.
void apply_layer(VectorXd &rho, const MatrixXd &pair_matrix, int q, int L, int t);

/// Largest chain length the dense oracle accepts for a given q (q^{2L} <= 2^16).
int max_oracle_sites(int q);

struct BinaryProjection {
    VectorXd projected;
    double distance = 0;
};

/// Orthogonal projection onto distributions uniform over the non-identity labels of every site.
BinaryProjection binary_project(const VectorXd &rho, int q, int L);

/// Marginal over binary strings; bit x of the result index is 1 iff site x is non-identity.
VectorXd binary_marginal(const VectorXd &rho, int q, int L);

/// Inverse of binary_marginal on binary-form distributions.
VectorXd binary_lift(const VectorXd &rho_bar, int q, int L);

/// Haar-distributed n x n unitary.
MatrixXcd haar_sample(int n, std::mt19937_64 &rng);

}  // namespace opspread
