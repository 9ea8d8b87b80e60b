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

#include "opspread/pauli.hpp"

#include <Eigen/QR>
#include <bit>
#include <cmath>
#include <string>

namespace opspread {

namespace {

void check_single(int a, int q) {
    require(q >= 2, "q must be >= 2");
    require(a >= 0 && a < q * q, "Pauli index " + std::to_string(a) + " out of range for q=" + std::to_string(q));
}

void check_pair(int a, int q) {
    require(q >= 2, "q must be >= 2");
    require(a >= 0 && a < q * q * q * q, "pair index " + std::to_string(a) + " out of range for q=" + std::to_string(q));
}

int mod(int x, int q) {
    int r = x % q;
    return r < 0 ? r + q : r;
}

std::size_t state_count(int q, int L) {
    std::size_t n = 1;
    for (int i = 0; i < L; ++i) n *= static_cast<std::size_t>(q * q);
    return n;
}

void check_chain(int q, int L) {
    require(q >= 2, "q must be >= 2");
    require(L >= 2 && L % 2 == 0, "chain length must be even and >= 2");
    require(L <= max_oracle_sites(q), "chain state space exceeds the 2^16 oracle cap");
}

}  // namespace

PauliIndex PauliIndex::from_flat(int a, int q) {
    check_single(a, q);
    return {a / q, a % q};
}

PairIndex PairIndex::from_flat(int a, int q) {
    check_pair(a, q);
    const int q2 = q * q;
    return {PauliIndex::from_flat(a / q2, q), PauliIndex::from_flat(a % q2, q)};
}

int phi_exponent(int a, int b, int q) {
    const PairIndex pa = PairIndex::from_flat(a, q);
    const PairIndex pb = PairIndex::from_flat(b, q);
    const int k = pb.x.a_prime * pa.x.a_dprime - pa.x.a_prime * pb.x.a_dprime +
                  pb.y.a_prime * pa.y.a_dprime - pa.y.a_prime * pb.y.a_dprime;
    return mod(k, q);
}

std::complex<double> phi(int a, int b, int q) {
    const double angle = 2.0 * M_PI * phi_exponent(a, b, q) / q;
    return -std::polar(1.0, angle);
}

std::complex<double> phi(const PairIndex &a, const PairIndex &b, int q) {
    return phi(a.flat(q), b.flat(q), q);
}

int pair_negate(int a, int q) {
    const PairIndex p = PairIndex::from_flat(a, q);
    const PairIndex n{{mod(-p.x.a_prime, q), mod(-p.x.a_dprime, q)}, {mod(-p.y.a_prime, q), mod(-p.y.a_dprime, q)}};
    return n.flat(q);
}

MatrixXcd sigma_matrix(const PauliIndex &a, int q) {
    check_single(a.flat(q), q);
    MatrixXcd s = MatrixXcd::Zero(q, q);
    for (int m = 0; m < q; ++m) s(mod(m + a.a_prime, q), m) = std::polar(1.0, 2.0 * M_PI * mod(m * a.a_dprime, q) / q);
    return s;
}

MatrixXcd sigma_matrix(int a, int q) { return sigma_matrix(PauliIndex::from_flat(a, q), q); }

int max_oracle_sites(int q) {
    int L = 0;
    std::size_t n = 1;
    while (n * static_cast<std::size_t>(q * q) <= (std::size_t{1} << 16)) {
        n *= static_cast<std::size_t>(q * q);
        ++L;
    }
    return L;
}

void apply_layer(VectorXd &rho, const MatrixXd &pair_matrix, int q, int L, int t) {
    const std::size_t q2 = static_cast<std::size_t>(q * q);
    const int np = static_cast<int>(q2 * q2);
    const std::size_t n = rho.size();
    std::vector<std::size_t> stride(L);
    stride[0] = 1;
    for (int x = 1; x < L; ++x) stride[x] = stride[x - 1] * q2;

    const int first = (t % 2 == 0) ? 0 : 1;
    VectorXd out(n);
    for (int left = first; left < L; left += 2) {
        const int right = (left + 1) % L;
        const std::size_t sl = stride[left], sr = stride[right];
        out.setZero();
        for (std::size_t i = 0; i < n; ++i) {
            const double w = rho[i];
            if (w == 0.0) continue;
            const std::size_t dl = (i / sl) % q2, dr = (i / sr) % q2;
            const std::size_t base = i - dl * sl - dr * sr;
            const int a = static_cast<int>(dl * q2 + dr);
            for (int p = 0; p < np; ++p) {
                const double m = pair_matrix(a, p);
                if (m == 0.0) continue;
                out[base + (p / q2) * sl + (p % q2) * sr] += w * m;
            }
        }
        rho.swap(out);
    }
}

std::vector<VectorXd> evolve_full_chain(int q, const Coefficients<double> &coeffs, int L, const VectorXd &initial,
                                        int t_max) {
    check_chain(q, L);
    require(coeffs.q == q, "evolve_full_chain: coefficient q mismatch");
    require(static_cast<std::size_t>(initial.size()) == state_count(q, L), "evolve_full_chain: initial has wrong size");
    require(t_max >= 0, "evolve_full_chain: t_max must be >= 0");
    const MatrixXd m = pair_transition_matrix(coeffs).entries;
    std::vector<VectorXd> out;
    out.reserve(t_max + 1);
    out.push_back(initial);
    VectorXd rho = initial;
    for (int t = 1; t <= t_max; ++t) {
        apply_layer(rho, m, q, L, t);
        out.push_back(rho);
    }
    return out;
}

namespace {

// Binary pattern of a full string index: bit x set iff site x is non-identity.
std::size_t pattern_of(std::size_t i, std::size_t q2, int L) {
    std::size_t pat = 0;
    for (int x = 0; x < L; ++x, i /= q2)
        if (i % q2 != 0) pat |= std::size_t{1} << x;
    return pat;
}

}  // namespace

VectorXd binary_marginal(const VectorXd &rho, int q, int L) {
    check_chain(q, L);
    const std::size_t q2 = q * q;
    require(static_cast<std::size_t>(rho.size()) == state_count(q, L), "binary_marginal: wrong size");
    VectorXd bar = VectorXd::Zero(std::size_t{1} << L);
    for (std::size_t i = 0; i < static_cast<std::size_t>(rho.size()); ++i) bar[pattern_of(i, q2, L)] += rho[i];
    return bar;
}

VectorXd binary_lift(const VectorXd &rho_bar, int q, int L) {
    check_chain(q, L);
    const std::size_t q2 = q * q;
    require(rho_bar.size() == (Eigen::Index{1} << L), "binary_lift: wrong size");
    const std::size_t n = state_count(q, L);
    VectorXd rho(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t pat = pattern_of(i, q2, L);
        rho[i] = rho_bar[pat] / std::pow(double(q2 - 1), std::popcount(pat));
    }
    return rho;
}

BinaryProjection binary_project(const VectorXd &rho, int q, int L) {
    BinaryProjection out;
    out.projected = binary_lift(binary_marginal(rho, q, L), q, L);
    out.distance = (rho - out.projected).norm();
    return out;
}

MatrixXcd haar_sample(int n, std::mt19937_64 &rng) {
    require(n >= 1, "haar_sample: n must be >= 1");
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    MatrixXcd z(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) z(i, j) = {gauss(rng), gauss(rng)};
    Eigen::HouseholderQR<MatrixXcd> qr(z);
    MatrixXcd u = qr.householderQ();
    const MatrixXcd &r = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
        const double mag = std::abs(r(j, j));
        u.col(j) *= mag > 0 ? r(j, j) / mag : 1.0;
    }
    return u;
}

}  // namespace opspread
