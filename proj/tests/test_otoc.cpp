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

#include "opspread/ensembles.hpp"
#include "opspread/growth.hpp"
#include "opspread/otoc.hpp"
#include "opspread/transfer.hpp"

namespace opspread {
namespace {

TransitionRates<double> poisson_rates(double al) { return transition_rates(poisson_coefficients(2, al)); }

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> t;
    for (double x = lo; x <= hi + 1e-9; x += step) t.push_back(x);
    return t;
}

TEST(Delta, VanishesForHaar) {
    const auto r = transition_rates(Coefficients<double>::haar(2));
    for (int n : {2, 4, 6}) EXPECT_NEAR(delta_correction(r, n), 0, 1e-12);
    EXPECT_NEAR(delta_correction(transition_rates(Coefficients<double>::haar(3)), 4), 0, 1e-12);
}

TEST(Delta, GrowsWithAlphaAndStaysSmall) {
    for (int n : {2, 4}) {
        double prev = -1;
        for (int k = 1; k <= 9; ++k) {
            const double d = delta_correction(poisson_rates(0.1 * k), n);
            EXPECT_GT(d, prev);
            EXPECT_LT(std::abs(d), 0.2);
            prev = d;
        }
    }
}

TEST(Delta, OrderTwoVersusOrderFour) {
    const double d2 = delta_correction(poisson_rates(0.6), 2), d4 = delta_correction(poisson_rates(0.6), 4);
    EXPECT_LT(std::abs(d4 - d2) / std::abs(d4), 0.10) << "d2=" << d2 << " d4=" << d4;
}

TEST(Delta, ConvergesWithOrder) {
    const auto r = poisson_rates(0.6);
    const double d4 = delta_correction(r, 4), d6 = delta_correction(r, 6), d8 = delta_correction(r, 8);
    EXPECT_LT(std::abs(d6 - d4), std::abs(d4 - delta_correction(r, 2)));
    EXPECT_LT(std::abs(d8 - d6), std::abs(d6 - d4));
    EXPECT_LT(std::abs(d8 - d6) / d8, 0.02);
}

TEST(Delta, RejectsOddOrder) { EXPECT_THROW(delta_correction(poisson_rates(0.6), 3), ArgumentError); }

TEST(OtocValue, Limits) {
    const auto r = poisson_rates(0.6);
    const auto dd = drift_diffusion(r, 4);
    const double delta = delta_correction(r, 4);
    EXPECT_LT(otoc_value(60, 1e-3, dd.v_b, dd.d, delta, 2), 1e-12);
    EXPECT_NEAR(otoc_value(60, 10 * 60 / dd.v_b, dd.v_b, dd.d, delta, 2), 1, 1e-3);
    EXPECT_THROW(otoc_value(60, 0, dd.v_b, dd.d, delta, 2), ArgumentError);
}

TEST(OtocValue, StepWithoutDiffusion) {
    EXPECT_EQ(otoc_value(10, 5, 1.0, 0, 0, 2), 0);
    EXPECT_EQ(otoc_value(10, 10, 1.0, 0, 0, 2), 0.5);
    EXPECT_EQ(otoc_value(10, 20, 1.0, 0, 0, 2), 1);
    const auto c = otoc_curve(transition_rates(Coefficients<double>::trivial(2)), 2, 5, grid(1, 50, 1));
    for (double v : c.c_values) EXPECT_EQ(v, 0);
}

TEST(OtocCurve, MonotoneAndBounded) {
    const auto ts = grid(1, 300, 1);
    for (double al : {0.0, 0.3, 0.6, 0.9})
        for (int n : {0, 2, 4}) {
            const auto c = otoc_curve(poisson_rates(al), n, 60, ts);
            ASSERT_EQ(c.c_values.size(), ts.size());
            for (std::size_t k = 0; k < ts.size(); ++k) {
                EXPECT_GE(c.c_values[k], 0);
                EXPECT_LE(c.c_values[k], 1 + 1e-9);
                if (k) {
                    EXPECT_GE(c.c_values[k], c.c_values[k - 1]);
                }
            }
        }
}

TEST(OtocCurve, HaarOrderIndependent) {
    const auto r = transition_rates(Coefficients<double>::haar(2));
    const auto ts = grid(1, 200, 0.5);
    const auto a = otoc_curve(r, 0, 60, ts), b = otoc_curve(r, 4, 60, ts);
    for (std::size_t k = 0; k < ts.size(); ++k) EXPECT_NEAR(a.c_values[k], b.c_values[k], 1e-10);
}

TEST(OtocCurve, OrdersAgree) {
    const auto r = poisson_rates(0.6);
    const auto ts = grid(50, 200, 0.5);
    const auto c0 = otoc_curve(r, 0, 60, ts), c2 = otoc_curve(r, 2, 60, ts), c4 = otoc_curve(r, 4, 60, ts);
    double sup = 0;
    for (std::size_t k = 0; k < ts.size(); ++k)
        sup = std::max({sup, std::abs(c0.c_values[k] - c2.c_values[k]), std::abs(c0.c_values[k] - c4.c_values[k]),
                        std::abs(c2.c_values[k] - c4.c_values[k])});
    EXPECT_LT(sup, 0.02);
    EXPECT_EQ(c0.delta, 0);
    EXPECT_GT(c4.delta, 0);
}

TEST(OtocCurve, DeltaOnlyShiftsSubleadingTerm) {
    const auto r = poisson_rates(0.9);
    const auto dd = drift_diffusion(r, 4);
    const double delta = delta_correction(r, 4);
    double worst = 0, peak = 0;
    for (double t = 1; t <= 400; t += 0.5) {
        const double with = otoc_value(60, t, dd.v_b, dd.d, delta, 2), without = otoc_value(60, t, dd.v_b, dd.d, 0, 2);
        worst = std::max(worst, std::abs(with - without));
        const double x = 60 - dd.v_b * t;
        peak = std::max(peak, std::exp(-x * x / (2 * dd.d * t)) / std::sqrt(2 * M_PI * dd.d * t));
    }
    EXPECT_LE(worst, std::abs(delta) / 3 * peak + 1e-15);
}

}  // namespace
}  // namespace opspread
