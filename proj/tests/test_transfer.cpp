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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "opspread/ensembles.hpp"
#include "opspread/growth.hpp"
#include "opspread/transfer.hpp"
#include "oracles.hpp"

namespace opspread {
namespace {

TransitionRates<double> make_rates(int q, double t1, double tplus) {
    TransitionRates<double> r;
    r.q = q;
    r.t1 = t1;
    r.tplus = tplus;
    r.tminus = tplus / (q * q - 1);
    r.tx = 1 - t1 - tplus;
    r.t11 = 1 - 2 * r.tminus;
    return r;
}

// Random stochastic rate tables away from the trivial corner.
std::vector<TransitionRates<double>> random_rates(int count, std::uint64_t seed, int q = 2) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<TransitionRates<double>> out;
    while (static_cast<int>(out.size()) < count) {
        const double t1 = 0.02 + 0.9 * u(rng);
        const double tp = (1 - t1) * u(rng);
        if (tp / (q * q - 1) > 0.5) continue;
        out.push_back(make_rates(q, t1, tp));
    }
    return out;
}

TransitionRates<double> poisson_rates(int q, double al) { return transition_rates(poisson_coefficients(q, al)); }

TransitionRates<double> brownian_rates(int q, double lam) {
    return transition_rates(coefficients(brownian_moments(q, lam)));
}

// Eigen-sum form of the front diffusion constant, valid for a simple spectrum.
double diffusion_eigen_sum(const TransferPair<double> &tp) {
    const MatrixXd m = tp.total();
    Eigen::EigenSolver<MatrixXd> es(m);
    const Eigen::MatrixXcd v = es.eigenvectors();
    const Eigen::MatrixXcd w = v.inverse();
    const Eigen::VectorXcd lam = es.eigenvalues();
    Eigen::Index one = 0;
    (lam.array() - 1.0).abs().minCoeff(&one);
    const Eigen::MatrixXcd dp = tp.dprime_matrix.cast<std::complex<double>>();
    const std::complex<double> d11 = (w.row(one) * dp * v.col(one))(0, 0);
    std::complex<double> sum = 0;
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
        if (j == one) continue;
        sum += (w.row(one) * dp * v.col(j))(0, 0) * (w.row(j) * dp * v.col(one))(0, 0) / (1.0 - lam[j]);
    }
    const std::complex<double> d = 4.0 * d11 * (1.0 - d11) + 8.0 * sum;
    return d.real();
}

TEST(BuildTransfer, OrderZeroMatrices) {
    for (const auto &r : random_rates(10, 1, 2)) {
        const auto tp = build_transfer(r, 0);
        ASSERT_EQ(tp.dim(), 2);
        const double q2 = 4;
        EXPECT_NEAR(tp.d_matrix(0, 0), 0, 1e-15);
        EXPECT_NEAR(tp.d_matrix(0, 1), r.t1, 1e-15);
        EXPECT_NEAR(tp.d_matrix(1, 0), 0, 1e-15);
        EXPECT_NEAR(tp.d_matrix(1, 1), r.tx + r.tplus, 1e-15);
        EXPECT_NEAR(tp.dprime_matrix(0, 0), (r.tx + (q2 - 1) * r.tminus) / q2, 1e-15);
        EXPECT_NEAR(tp.dprime_matrix(1, 0), (r.t1 + r.tplus + (q2 - 1) * (r.t11 + r.tminus)) / q2, 1e-15);
        EXPECT_NEAR(tp.dprime_matrix(0, 1), 0, 1e-15);
        EXPECT_NEAR(tp.dprime_matrix(1, 1), 0, 1e-15);
    }
}

TEST(BuildTransfer, ColumnSums) {
    const auto r = poisson_rates(2, 0.6);
    for (int n : {0, 2, 4, 6}) {
        const MatrixXd m = build_transfer(r, n).total();
        EXPECT_EQ(m.rows(), 2 << n);
        EXPECT_LT((m.colwise().sum().array() - 1).abs().maxCoeff(), 1e-12);
        EXPECT_GE(m.minCoeff(), 0);
    }
}

TEST(BuildTransfer, RejectsBadOrders) {
    const auto r = poisson_rates(2, 0.6);
    EXPECT_THROW(build_transfer(r, 3), ArgumentError);
    EXPECT_THROW(build_transfer(r, -2), ArgumentError);
    EXPECT_THROW(build_transfer(r, 14), ArgumentError);
}

TEST(Stationary, PerronVector) {
    for (const auto &r : random_rates(20, 2, 2)) {
        const auto tp = build_transfer(r, 2);
        const auto sp = stationary(tp);
        EXPECT_GE(sp.v1.minCoeff(), 0);
        EXPECT_NEAR(sp.v1.sum(), 1, 1e-12);
        EXPECT_LT((tp.total() * sp.v1 - sp.v1).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Stationary, HaarOrderZero) {
    const auto r = transition_rates(Coefficients<double>::haar(2));
    const auto sp = stationary(build_transfer(r, 0));
    // Stationary vector of a two-state column-stochastic chain.
    const MatrixXd m = build_transfer(r, 0).total();
    const double a = m(1, 0), b = m(0, 1);
    EXPECT_NEAR(sp.v1[0], b / (a + b), 1e-14);
    EXPECT_NEAR(sp.v1[1], a / (a + b), 1e-14);
}

TEST(DriftDiffusion, HaarExactAtEveryOrder) {
    const auto r = transition_rates(Coefficients<double>::haar(2));
    for (int n : {0, 2, 4, 6}) {
        const auto dd = drift_diffusion(r, n);
        EXPECT_NEAR(dd.v_b, 0.6, 1e-10) << n;
        EXPECT_NEAR(dd.d, 0.64, 1e-10) << n;
    }
    const auto r3 = transition_rates(Coefficients<double>::haar(3));
    for (int n : {0, 2, 4}) {
        EXPECT_NEAR(drift_diffusion(r3, n).v_b, 0.8, 1e-10);
        EXPECT_NEAR(drift_diffusion(r3, n).d, 4.0 * 9 / 100, 1e-10);
    }
}

TEST(DriftDiffusion, TrivialIsStatic) {
    const auto r = transition_rates(Coefficients<double>::trivial(2));
    for (int n : {0, 2}) {
        const auto dd = drift_diffusion(r, n);
        EXPECT_NEAR(dd.v_b, 0, 1e-12);
        EXPECT_EQ(dd.d, 0);
    }
}

TEST(DriftDiffusion, ResolventMatchesEigenSum) {
    for (const auto &r : random_rates(20, 3, 2)) {
        const auto tp = build_transfer(r, 2);
        const double d = diffusion_constant(tp, stationary(tp));
        EXPECT_NEAR(d, diffusion_eigen_sum(tp), 1e-8);
    }
}

TEST(DriftDiffusion, OrderZeroMatchesTwoStateOracle) {
    for (int q : {2, 3})
        for (const auto &r : random_rates(20, 4, q)) {
            const auto o = testing::order0_two_state(r.t1, r.tx, r.tplus, r.tminus, r.t11, q);
            const auto dd = drift_diffusion(r, 0);
            EXPECT_NEAR(dd.v_b, o.v, 1e-12);
            EXPECT_NEAR(dd.d, o.d, 1e-12);
        }
}

TEST(ClosedFormN0, MatchesGenericPath) {
    for (int q : {2, 3})
        for (const auto &r : random_rates(50, 5, q)) {
            const auto a = closed_form_n0(r), b = drift_diffusion(r, 0);
            EXPECT_NEAR(a.v_b, b.v_b, 1e-12);
            EXPECT_NEAR(a.d, b.d, 1e-12);
        }
    const auto h = closed_form_n0(make_rates(2, 0.2, 0.6));
    EXPECT_NEAR(h.v_b, 0.6, 1e-15);
    EXPECT_NEAR(h.d, 0.64, 1e-15);
    const auto half = make_rates(2, 0.5, 0.3);
    EXPECT_NEAR(closed_form_n0(half).d, drift_diffusion(half, 0).d, 1e-12);
}

TEST(PoissonClosedForm, Limits) {
    const auto h = poisson_closed_form(2, 0.0);
    EXPECT_NEAR(h.v_b, 0.6, 1e-15);
    EXPECT_NEAR(h.d, 0.64, 1e-15);
    const auto t = poisson_closed_form(2, 1.0);
    EXPECT_NEAR(t.v_b, 0, 1e-15);
    EXPECT_NEAR(t.d, 0, 1e-15);
}

TEST(PoissonClosedForm, MatchesGenericPath) {
    for (int q : {2, 3})
        for (int k = 1; k <= 9; ++k) {
            const double al = 0.1 * k;
            const auto a = poisson_closed_form(q, al), b = drift_diffusion(poisson_rates(q, al), 0);
            EXPECT_NEAR(a.v_b, b.v_b, 1e-10);
            EXPECT_NEAR(a.d, b.d, 1e-10);
        }
}

TEST(PoissonClosedForm, LargeQLimit) {
    const double al = std::sqrt(0.5);
    const auto a = poisson_closed_form(32, al);
    const auto l = poisson_large_q(al);
    EXPECT_NEAR(l.v_b, 0.6, 1e-15);
    EXPECT_NEAR(a.v_b / 0.6, 1, 0.01);
    EXPECT_NEAR(a.d / l.d, 1, 0.01);
    EXPECT_NEAR(l.d, 4 * 0.25 * 0.75 / std::pow(1.25, 3), 1e-15);
}

TEST(ContinuousLimit, Constants) {
    const auto p = continuous_limit(2, EnsembleKind::Poisson);
    EXPECT_NEAR(p.v_b, 27.0 / 70, 1e-15);
    EXPECT_NEAR(p.d, 9.0 / 14, 1e-15);
    const auto b2 = continuous_limit(2, EnsembleKind::Brownian);
    EXPECT_NEAR(b2.v_b, 9.0 / 16, 1e-15);
    EXPECT_NEAR(b2.d, 15.0 / 16, 1e-15);
    EXPECT_THROW(continuous_limit(2, EnsembleKind::Haar), ArgumentError);
    const auto a = continuous_limit(16, EnsembleKind::Poisson), b = continuous_limit(16, EnsembleKind::Brownian);
    EXPECT_NEAR(a.v_b / b.v_b, 1, 0.01);
    EXPECT_NEAR(a.d / b.d, 1, 0.01);
}

TEST(ContinuousLimit, SmallStrengthScaling) {
    const double lam = 1e-3;
    for (int q : {2, 3}) {
        const auto p = continuous_limit(q, EnsembleKind::Poisson);
        const auto dp = drift_diffusion(poisson_rates(q, std::exp(-lam / 2)), 0);
        EXPECT_NEAR(dp.v_b / lam / p.v_b, 1, 0.01);
        EXPECT_NEAR(dp.d / lam / p.d, 1, 0.01);
        const auto b = continuous_limit(q, EnsembleKind::Brownian);
        const auto db = drift_diffusion(brownian_rates(q, lam), 0);
        EXPECT_NEAR(db.v_b / lam / b.v_b, 1, 0.01);
        EXPECT_NEAR(db.d / lam / b.d, 1, 0.01);
    }
}

TEST(EigvecConvergence, HaarIsExact) {
    const auto r = transition_rates(Coefficients<double>::haar(2));
    for (int n : {2, 4, 6, 8}) EXPECT_LT(eigvec_convergence(r, n), 1e-10);
}

TEST(EigvecConvergence, DecreasesWithOrderAndGrowsWithAlpha) {
    std::vector<std::vector<double>> norms;
    for (double al : {0.3, 0.6, 0.9}) {
        const auto r = poisson_rates(2, al);
        std::vector<double> row;
        for (int n : {2, 4, 6, 8}) row.push_back(eigvec_convergence(r, n));
        for (std::size_t k = 1; k < row.size(); ++k) EXPECT_LT(row[k], row[k - 1]);
        norms.push_back(row);
    }
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_LT(norms[0][k], norms[1][k]);
        EXPECT_LT(norms[1][k], norms[2][k]);
    }
}

TEST(LongDouble, MatchesDouble) {
    const auto rl = transition_rates(poisson_coefficients<long double>(2, 0.6L));
    const auto dl = drift_diffusion(rl, 2);
    const auto dd = drift_diffusion(poisson_rates(2, 0.6), 2);
    EXPECT_NEAR(double(dl.v_b), dd.v_b, 1e-12);
    EXPECT_NEAR(double(dl.d), dd.d, 1e-11);
}

}  // namespace
}  // namespace opspread
