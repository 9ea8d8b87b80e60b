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

#include "opspread/ensembles.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>

#include "opspread/pauli.hpp"
#include "opspread/random.hpp"

namespace opspread {

std::string to_string(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::Haar: return "haar";
        case EnsembleKind::Trivial: return "trivial";
        case EnsembleKind::Poisson: return "poisson";
        case EnsembleKind::Brownian: return "brownian";
        case EnsembleKind::FixedConjugacy: return "fixed";
        case EnsembleKind::RawMoments: return "raw";
    }
    return "unknown";
}

EnsembleKind ensemble_kind_from_string(const std::string &name) {
    for (auto k : {EnsembleKind::Haar, EnsembleKind::Trivial, EnsembleKind::Poisson, EnsembleKind::Brownian,
                   EnsembleKind::FixedConjugacy, EnsembleKind::RawMoments})
        if (to_string(k) == name) return k;
    throw ArgumentError("unknown ensemble '" + name + "'");
}

GateEnsembleSpec GateEnsembleSpec::haar(int q) {
    GateEnsembleSpec s;
    s.kind = EnsembleKind::Haar;
    s.q = q;
    return s;
}

GateEnsembleSpec GateEnsembleSpec::trivial(int q) {
    GateEnsembleSpec s;
    s.kind = EnsembleKind::Trivial;
    s.q = q;
    return s;
}

GateEnsembleSpec GateEnsembleSpec::poisson(int q, std::complex<double> alpha) {
    GateEnsembleSpec s;
    s.kind = EnsembleKind::Poisson;
    s.q = q;
    s.alpha = alpha;
    return s;
}

GateEnsembleSpec GateEnsembleSpec::brownian(int q, double lambda, int steps) {
    GateEnsembleSpec s;
    s.kind = EnsembleKind::Brownian;
    s.q = q;
    s.lambda = lambda;
    s.brownian_steps = steps;
    return s;
}

GateEnsembleSpec GateEnsembleSpec::fixed(const MatrixXcd &u0) {
    GateEnsembleSpec s;
    s.kind = EnsembleKind::FixedConjugacy;
    s.u0 = u0;
    s.q = static_cast<int>(std::lround(std::sqrt(static_cast<double>(u0.rows()))));
    return s;
}

GateEnsembleSpec GateEnsembleSpec::raw_moments(const MomentSet<double> &m) {
    GateEnsembleSpec s;
    s.kind = EnsembleKind::RawMoments;
    s.q = m.q;
    s.raw = m;
    return s;
}

void GateEnsembleSpec::validate() const {
    require(q >= 2, "ensemble: q must be >= 2");
    switch (kind) {
        case EnsembleKind::Poisson:
            require(std::abs(alpha) <= 1.0, "ensemble: |alpha| must be <= 1");
            break;
        case EnsembleKind::Brownian:
            require(lambda >= 0.0 && std::isfinite(lambda), "ensemble: lambda must be >= 0");
            require(brownian_steps >= 1, "ensemble: brownian_steps must be >= 1");
            break;
        case EnsembleKind::FixedConjugacy: {
            const int n = q * q;
            require(u0.rows() == n && u0.cols() == n, "ensemble: u0 must be q^2 x q^2");
            const double dev = (u0 * u0.adjoint() - MatrixXcd::Identity(n, n)).norm();
            require(dev <= 1e-10, "ensemble: u0 is not unitary");
            break;
        }
        case EnsembleKind::RawMoments:
            require(raw.q == q, "ensemble: raw moment q mismatch");
            break;
        default:
            break;
    }
}

MomentSet<double> fixed_moments(const MatrixXcd &u) {
    const int q = static_cast<int>(std::lround(std::sqrt(static_cast<double>(u.rows()))));
    const std::complex<double> t1 = u.trace();
    const std::complex<double> t2 = (u * u).trace();
    MomentSet<double> m;
    m.q = q;
    m.r11 = std::norm(t1);
    m.r22 = std::norm(t2);
    m.r1111 = m.r11 * m.r11;
    m.r112 = t1 * t1 * std::conj(t2);
    return m;
}

MomentSet<double> moments(const GateEnsembleSpec &spec) {
    spec.validate();
    switch (spec.kind) {
        case EnsembleKind::Haar: return MomentSet<double>::haar(spec.q);
        case EnsembleKind::Trivial: return MomentSet<double>::trivial(spec.q);
        case EnsembleKind::Poisson: return poisson_moments(spec.q, std::abs(spec.alpha));
        case EnsembleKind::Brownian: return brownian_moments(spec.q, spec.lambda);
        case EnsembleKind::FixedConjugacy: return fixed_moments(spec.u0);
        case EnsembleKind::RawMoments: return spec.raw;
    }
    throw ArgumentError("moments: unknown ensemble");
}

namespace {

// Fixed-size work for the common q = 2 case; dynamic otherwise.
template <typename Mat>
class BrownianStepper {
  public:
    explicit BrownianStepper(Eigen::Index n) : es_(n), h_(n, n), a_(n, n), out_(n, n), tmp_(n, n) {}

    // u <- exp(i h) u for Hermitian h. A Taylor series is used when its truncation error is below
    // rounding; otherwise the eigen-decomposition.
    template <typename Rng, typename Dist>
    void step(Mat &u, Rng &rng, Dist &diag, Dist &off) {
        const Eigen::Index n = h_.rows();
        for (Eigen::Index i = 0; i < n; ++i) {
            h_(i, i) = diag(rng);
            for (Eigen::Index j = i + 1; j < n; ++j) {
                h_(i, j) = {off(rng), off(rng)};
                h_(j, i) = std::conj(h_(i, j));
            }
        }
        const double norm = h_.norm();  // Frobenius, bounds the spectral norm
        if (norm < 0.5) {
            int degree = 1;
            double term = norm;
            while (term > 1e-18 && degree < 30) {
                ++degree;
                term *= norm / degree;
            }
            a_ = std::complex<double>(0, 1) * h_;
            out_ = a_ / double(degree);
            out_.diagonal().array() += 1.0;
            for (int k = degree - 1; k >= 1; --k) {
                tmp_.noalias() = a_ * out_;
                out_ = tmp_ / double(k);
                out_.diagonal().array() += 1.0;
            }
        } else {
            es_.compute(h_);
            const Eigen::VectorXcd phases =
                (std::complex<double>(0, 1) * es_.eigenvalues().template cast<std::complex<double>>()).array().exp();
            out_ = es_.eigenvectors() * phases.asDiagonal() * es_.eigenvectors().adjoint();
        }
        tmp_.noalias() = out_ * u;
        u = tmp_;
    }

  private:
    Eigen::SelfAdjointEigenSolver<Mat> es_;
    Mat h_, a_, out_, tmp_;
};

template <typename Mat>
MatrixXcd brownian_gate_impl(int n, double lambda, int steps, std::mt19937_64 &rng) {
    const double var = lambda / (n * steps);
    std::normal_distribution<double> diag(0.0, std::sqrt(var));
    std::normal_distribution<double> off(0.0, std::sqrt(var / 2));
    Mat u = Mat::Identity(n, n);
    BrownianStepper<Mat> stepper(n);
    for (int k = 0; k < steps; ++k) stepper.step(u, rng, diag, off);
    return u;
}

MatrixXcd brownian_gate(int n, double lambda, int steps, std::mt19937_64 &rng) {
    if (n == 4) return brownian_gate_impl<Eigen::Matrix4cd>(n, lambda, steps, rng);
    return brownian_gate_impl<MatrixXcd>(n, lambda, steps, rng);
}

}  // namespace

MatrixXcd sample_gate(const GateEnsembleSpec &spec, std::mt19937_64 &rng, std::size_t *resampled) {
    const int n = spec.q * spec.q;
    switch (spec.kind) {
        case EnsembleKind::Haar: return haar_sample(n, rng);
        case EnsembleKind::Trivial: return MatrixXcd::Identity(n, n);
        case EnsembleKind::Poisson: {
            const MatrixXcd id = MatrixXcd::Identity(n, n);
            for (;;) {
                const MatrixXcd u0 = haar_sample(n, rng);
                Eigen::PartialPivLU<MatrixXcd> lu(id - std::conj(spec.alpha) * u0);
                if (lu.rcond() > 1e-12) return (spec.alpha * id - u0) * lu.inverse();
                if (resampled) ++*resampled;
            }
        }
        case EnsembleKind::Brownian: return brownian_gate(n, spec.lambda, spec.brownian_steps, rng);
        case EnsembleKind::FixedConjugacy: {
            const MatrixXcd v = haar_sample(n, rng);
            return v * spec.u0 * v.adjoint();
        }
        case EnsembleKind::RawMoments: break;
    }
    throw ArgumentError("sample_gate: raw-moment ensembles cannot be sampled");
}

MomentEstimate moments_mc(const GateEnsembleSpec &spec, std::size_t n_samples, std::uint64_t seed,
                          unsigned threads) {
    spec.validate();
    require(n_samples >= 1000, "moments_mc: n_samples must be >= 1000");
    require(spec.kind != EnsembleKind::RawMoments, "moments_mc: raw-moment ensembles cannot be sampled");

    // Columns: r11, r22, r1111, Re r112, Im r112.
    constexpr int kStats = 5;
    constexpr std::size_t kChunk = 1000;
    const std::size_t chunks = (n_samples + kChunk - 1) / kChunk;
    std::vector<std::array<double, 2 * kStats>> sums(chunks);
    std::vector<std::size_t> resampled(chunks, 0);

    parallel_for(chunks, threads, [&](std::size_t c) {
        std::mt19937_64 rng = stream_rng(seed, c);
        std::array<double, 2 * kStats> acc{};
        const std::size_t end = std::min(n_samples, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            const MomentSet<double> m = fixed_moments(sample_gate(spec, rng, &resampled[c]));
            const double v[kStats] = {m.r11, m.r22, m.r1111, m.r112.real(), m.r112.imag()};
            for (int k = 0; k < kStats; ++k) {
                acc[k] += v[k];
                acc[kStats + k] += v[k] * v[k];
            }
        }
        sums[c] = acc;
    });

    std::array<double, 2 * kStats> tot{};
    MomentEstimate est;
    for (std::size_t c = 0; c < chunks; ++c) {
        for (int k = 0; k < 2 * kStats; ++k) tot[k] += sums[c][k];
        est.resampled += resampled[c];
    }
    const double n = static_cast<double>(n_samples);
    double mean[kStats], se[kStats];
    for (int k = 0; k < kStats; ++k) {
        mean[k] = tot[k] / n;
        const double var = std::max(0.0, (tot[kStats + k] - n * mean[k] * mean[k]) / (n - 1));
        se[k] = std::sqrt(var / n);
    }
    est.n_samples = n_samples;
    est.mean = {spec.q, mean[0], mean[1], mean[2], {mean[3], mean[4]}};
    est.error = {spec.q, se[0], se[1], se[2], {se[3], se[4]}};
    return est;
}

double series_q(long k, int q) {
    const double kk = static_cast<double>(k);
    const double q2 = static_cast<double>(q) * q;
    if (q2 > kk) return kk * (kk * kk - 1) / 3;
    return q2 * (4 * q2 * q2 - 6 * kk * q2 + 3 * kk * kk - 1) / 3;
}

double series_q_prime(long k, int q) {
    const double q2 = static_cast<double>(q) * q;
    if (q2 > static_cast<double>(k)) return 0;
    return q2 * (static_cast<double>(k) - q2);
}

MomentSet<double> moments_via_series(int q, double abs_alpha, double tol) {
    require(q >= 2, "moments_via_series: q must be >= 2");
    require(tol > 0, "moments_via_series: tol must be > 0");
    require(abs_alpha >= 0, "moments_via_series: |alpha| must be >= 0");
    require(abs_alpha < 1, "moments_via_series: series does not converge for |alpha| = 1");
    const double a2 = abs_alpha * abs_alpha;
    const double b = 1 - a2;
    const long q2 = static_cast<long>(q) * q;
    const double qq = static_cast<double>(q2);

    // Partial sums, indexed by power of a2 (index J-2 or l).
    double s1 = 0, s22a = 0, s22b = 0, s4 = 0, s112 = 0;
    double pw = 1;  // a2^(J-2)
    for (long j = 2;; ++j) {
        const long l = j - 2;  // s1 term index
        const double jj = static_cast<double>(j);
        const double mj = static_cast<double>(std::min(j, q2));
        const double t1 = pw * static_cast<double>(std::min(l + 1, q2));
        const double t22a = (jj - 1) * (jj - 1) * pw * mj;
        const double t22b = (jj - 1) * pw * a2 * mj;
        const double t4 = pw * (b * series_q(j, q) - 4 * a2 * qq * series_q_prime(j, q));
        const double t112 = pw * (jj - 1 - a2 * (jj + 1)) * series_q_prime(j, q);
        s1 += t1;
        s22a += t22a;
        s22b += t22b;
        s4 += t4;
        s112 += t112;
        // For J >= 2 q^2 every summand is bounded by a2^(J-2) * 8 q^4 J^3, and every prefactor applied
        // below is at most 4, so the remainder is bounded by a geometric series with ratio rho.
        if (j >= 2 * q2 + 2) {
            const double rho = a2 * std::pow((jj + 1) / jj, 3);
            if (rho < 1 && 4 * pw * 8 * qq * qq * jj * jj * jj * rho / (1 - rho) < tol) break;
        }
        pw *= a2;
        if (j > 100000000) throw NumericalError("moments_via_series: series did not converge");
    }

    MomentSet<double> m;
    m.q = q;
    m.r11 = a2 * qq * qq + b * b * s1;
    m.r22 = a2 * a2 * qq * qq + 4 * a2 * b * b * s1 + b * b * b * b * s22a - 4 * b * b * b * s22b;
    m.r1111 = a2 * a2 * std::pow(qq, 4) + 4 * a2 * qq * qq * (1 - std::pow(a2, static_cast<double>(q2))) + b * b * b * s4;
    m.r112 = a2 * a2 * std::pow(qq, 3) + 2 * qq * qq * std::pow(a2, static_cast<double>(q2)) * b + b * b * b * s112;
    return m;
}

double relaxation_time(double lambda_w) {
    if (lambda_w <= 0) return 0;
    if (lambda_w >= 1) return std::numeric_limits<double>::infinity();
    return -1.0 / std::log(lambda_w);
}

SpectralSummary spectral_summary(const Coefficients<double> &c, bool count) {
    const double q2 = static_cast<double>(c.q) * c.q;
    const double norm = q2 * q2 - 1;
    SpectralSummary s;
    s.signed_plus = (c.a2 + c.a3 + q2 * c.a1.real()) / norm;
    s.signed_minus = (c.a2 + c.a3 - q2 * c.a1.real()) / norm;
    s.lambda_plus = std::abs(s.signed_plus);
    s.lambda_minus = std::abs(s.signed_minus);
    s.lambda_i = std::abs(std::complex<double>(c.a3 - c.a2, q2 * c.a1.imag())) / norm;
    for (double l : {s.lambda_plus, s.lambda_minus, s.lambda_i})
        if (!(l <= 1 + kValidityTol))
            throw EnsembleValidityError("spectral_summary: singular value exceeds 1; coefficients outside the allowed region");
    s.lambda_w = std::max({s.lambda_plus, s.lambda_minus, s.lambda_i});
    s.tau_b = relaxation_time(s.lambda_w);
    if (!count) return s;

    const MatrixXd m = pair_transition_matrix(c).entries;
    // JacobiSVD: BDCSVD in Eigen 3.4.0 smears the degenerate clusters at the 1e-3 level.
    const VectorXd sv = Eigen::JacobiSVD<MatrixXd>(m).singularValues();
    const double targets[4] = {1.0, s.lambda_plus, s.lambda_minus, s.lambda_i};
    int *counts[4] = {&s.n_unit, &s.n_plus, &s.n_minus, &s.n_i};
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 4; ++j) best = std::min(best, std::abs(sv[k] - targets[j]));
        s.max_mismatch = std::max(s.max_mismatch, best);
        int hit = -1;
        for (int j = 0; j < 4 && hit < 0; ++j)
            if (std::abs(sv[k] - targets[j]) <= 1e-8) hit = j;
        if (hit < 0)
            ++s.n_unmatched;
        else
            ++*counts[hit];
    }
    return s;
}

std::vector<ParameterPoint> sample_parameter_space(int q, std::size_t n_points, std::uint64_t seed) {
    require(q == 2 || q == 3, "sample_parameter_space: q must be 2 or 3");
    const int n = q * q;
    std::vector<ParameterPoint> out(n_points);
    std::mt19937_64 rng = stream_rng(seed, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < n_points; ++i) {
        MatrixXcd u0;
        if (i % 2 == 0) {
            u0 = haar_sample(n, rng);
        } else {
            // Eigenphases contracted towards 1 so the sample also covers the near-trivial corner.
            const double spread = unit(rng);
            const MatrixXcd v = haar_sample(n, rng);
            Eigen::VectorXcd ph(n);
            for (int j = 0; j < n; ++j) ph[j] = std::polar(1.0, spread * M_PI * (2 * unit(rng) - 1));
            u0 = v * ph.asDiagonal() * v.adjoint();
        }
        const Coefficients<double> c = coefficients(fixed_moments(u0));
        out[i] = {c.a2 + c.a3, c.a1.real(), c};
    }
    return out;
}

}  // namespace opspread
