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
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "opspread/core.hpp"

namespace opspread {

enum class EnsembleKind { Haar, Trivial, Poisson, Brownian, FixedConjugacy, RawMoments };

std::string to_string(EnsembleKind kind);
EnsembleKind ensemble_kind_from_string(const std::string &name);

/// Unitary-invariant two-qudit gate distribution.
struct GateEnsembleSpec {
    EnsembleKind kind = EnsembleKind::Haar;
    int q = 2;
    std::complex<double> alpha = 0;  // Poisson mean
    double lambda = 0;               // Brownian strength
    MatrixXcd u0;                    // FixedConjugacy representative
    MomentSet<double> raw;           // RawMoments passthrough
    int brownian_steps = 200;        // sub-steps of the Brownian sampler

    static GateEnsembleSpec haar(int q);
    static GateEnsembleSpec trivial(int q);
    static GateEnsembleSpec poisson(int q, std::complex<double> alpha);
    static GateEnsembleSpec brownian(int q, double lambda, int steps = 200);
    static GateEnsembleSpec fixed(const MatrixXcd &u0);
    static GateEnsembleSpec raw_moments(const MomentSet<double> &m);

    /// Throws ArgumentError when an invariant is violated.
    void validate() const;
};

template <typename Scalar>
MomentSet<Scalar> poisson_moments(int q, Scalar abs_alpha) {
    require(q >= 2, "poisson_moments: q must be >= 2");
    require(abs_alpha >= Scalar(0) && abs_alpha <= Scalar(1), "poisson_moments: |alpha| must lie in [0, 1]");
    const int q2 = q * q;
    const Scalar a2 = abs_alpha * abs_alpha;
    const Scalar q4 = ipow<Scalar>(q, 4);
    const Scalar pm = ipow(a2, q2 - 1);
    const Scalar p0 = pm * a2;
    MomentSet<Scalar> m;
    m.q = q;
    m.r11 = 1 + a2 * q4 - p0;
    m.r22 = 2 + a2 * a2 * q4 - pm * (1 - a2) * (1 - a2) * q4 - 2 * p0;
    m.r1111 = 2 + 4 * a2 * q4 + a2 * a2 * q4 * q4 - pm * q4 * (1 + a2) * (1 + a2) - 2 * p0;
    m.r112 = a2 * a2 * ipow<Scalar>(q, 6) + pm * q4 * (1 - a2 * a2);
    return m;
}

template <typename Scalar>
MomentSet<Scalar> brownian_moments(int q, Scalar lambda) {
    using std::cosh;
    using std::exp;
    using std::sinh;
    require(q >= 2, "brownian_moments: q must be >= 2");
    require(lambda >= Scalar(0), "brownian_moments: lambda must be >= 0");
    const Scalar q2 = ipow<Scalar>(q, 2), q4 = q2 * q2, q6 = q4 * q2, q8 = q4 * q4;
    const Scalar e1 = exp(-lambda), e2 = exp(-2 * lambda);
    const Scalar c = cosh(2 * lambda / q2), s = sinh(2 * lambda / q2);
    MomentSet<Scalar> m;
    m.q = q;
    m.r11 = q4 * e1 + 1 - e1;
    m.r22 = 2 + Scalar(0.5) * e2 * (q4 * (q4 - 3) * c - 2 * q6 * s - q8 + 5 * q4 - 4);
    m.r1111 = m.r22 + 4 * (q4 - 1) * e1 + (q8 - 5 * q4 + 4) * e2;
    // Solution of the trace-moment heat equation; agrees with sampled Brownian gates.
    m.r112 = e2 * q4 * (q2 * c - Scalar(0.5) * (q4 - 3) * s);
    return m;
}

/// A1, A2, A3 as rational functions of the four moments.
template <typename Scalar>
Coefficients<Scalar> coefficients(const MomentSet<Scalar> &m) {
    require(m.q >= 2, "coefficients: q must be >= 2");
    const Scalar q2 = ipow<Scalar>(m.q, 2), q4 = q2 * q2, q6 = q4 * q2;
    const Scalar x = m.r22 + m.r1111 - 4 * m.r11;
    const Scalar re = m.r112.real(), im = m.r112.imag();
    const Scalar p9 = q4 - 9, p4 = q4 - 4;
    Coefficients<Scalar> c;
    c.q = m.q;
    c.a1 = {2 * x / (q4 * p9) - 2 * (q4 - 3) * re / (q6 * p9), -2 * im / (q2 * p4)};
    c.a2 = (q4 + 6) * x / (q4 * p9 * p4) + (m.r22 - 2) / p4 - 2 * re / (q2 * p9);
    c.a3 = (q4 * q4 - 8 * q4 + 6) * x / (q4 * p9 * p4) - (m.r22 - 2) / p4 - 2 * re / (q2 * p9);
    return c;
}

/// Direct |alpha|-polynomial form of coefficients(poisson_moments(q, |alpha|)).
template <typename Scalar>
Coefficients<Scalar> poisson_coefficients(int q, Scalar abs_alpha) {
    require(q >= 2, "poisson_coefficients: q must be >= 2");
    require(abs_alpha >= Scalar(0) && abs_alpha <= Scalar(1), "poisson_coefficients: |alpha| must lie in [0, 1]");
    const int qq = q * q;
    const Scalar q2 = qq, q4 = q2 * q2;
    const Scalar a2 = abs_alpha * abs_alpha;
    const Scalar lo = ipow(a2, qq - 1), mid = lo * a2, hi = mid * a2;
    const Scalar den = (q4 - 4) * (q4 - 9);
    Coefficients<Scalar> c;
    c.q = q;
    c.a1 = 8 * a2 * a2 / (q4 - 9) - 2 * (q2 - 1) * lo / (q2 * (q2 - 3)) + 2 * (q2 + 1) * hi / (q2 * (q2 + 3));
    c.a2 = 6 * a2 * a2 * (q4 + 1) / den - (q2 - 1) * lo / (q2 - 3) + 2 * (q4 - 1) * mid / (q4 - 4) -
           (q2 + 1) * hi / (q2 + 3);
    c.a3 = (6 + 15 * q4 - 10 * q4 * q4 + q4 * q4 * q4) * a2 * a2 / den - (q2 - 1) * lo / (q2 - 3) -
           2 * (q4 - 1) * mid / (q4 - 4) - (q2 + 1) * hi / (q2 + 3);
    return c;
}

/// Closed-form moments of any supported ensemble.
MomentSet<double> moments(const GateEnsembleSpec &spec);

/// Moments of a fixed unitary U (also the FixedConjugacy ensemble).
MomentSet<double> fixed_moments(const MatrixXcd &u);

struct MomentEstimate {
    MomentSet<double> mean;
    MomentSet<double> error;  // standard errors; r112 holds those of the real and imaginary parts
    std::size_t n_samples = 0;
    std::size_t resampled = 0;
};

/// Monte Carlo estimate from sampled gates; deterministic in (spec, n_samples, seed) for any thread count.
MomentEstimate moments_mc(const GateEnsembleSpec &spec, std::size_t n_samples, std::uint64_t seed,
                          unsigned threads = 0);

/// Draws one gate from the ensemble (Haar, Trivial, Poisson, Brownian, FixedConjugacy).
MatrixXcd sample_gate(const GateEnsembleSpec &spec, std::mt19937_64 &rng, std::size_t *resampled = nullptr);

/// Four-trace Haar sums entering the series for r1111 and r112.
double series_q(long k, int q);
double series_q_prime(long k, int q);

/// Poisson moments from the power series in |alpha|^2, truncated by a geometric tail bound.
MomentSet<double> moments_via_series(int q, double abs_alpha, double tol);

struct SpectralSummary {
    double lambda_plus = 0;   // |lambda_+|
    double lambda_minus = 0;  // |lambda_-|
    double lambda_i = 0;
    double signed_plus = 0;
    double signed_minus = 0;
    double lambda_w = 0;
    double tau_b = 0;
    int n_unit = 0;
    int n_plus = 0;
    int n_minus = 0;
    int n_i = 0;
    int n_unmatched = 0;
    double max_mismatch = 0;
};

double relaxation_time(double lambda_w);

/// Singular spectrum of the pair transition matrix. The numerical SVD is binned when count is true.
SpectralSummary spectral_summary(const Coefficients<double> &c, bool count = true);

struct ParameterPoint {
    double a23 = 0;    // A2 + A3
    double re_a1 = 0;  // Re A1
    Coefficients<double> coeffs;
};

/// Coefficients of fixed-conjugacy ensembles with randomly drawn representatives.
std::vector<ParameterPoint> sample_parameter_space(int q, std::size_t n_points, std::uint64_t seed);

}  // namespace opspread
