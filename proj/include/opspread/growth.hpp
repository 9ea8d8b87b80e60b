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

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "opspread/core.hpp"

namespace opspread {

/// Binary site values.
enum Binary : int { kI = 0, kX = 1 };

/// Pair code for (left, right) binary values.
constexpr int pair_code(int left, int right) { return 2 * left + right; }

template <typename Scalar>
TransitionRates<Scalar> transition_rates(const Coefficients<Scalar> &c) {
    const Scalar q2 = ipow<Scalar>(c.q, 2), q4 = q2 * q2;
    const Scalar s = c.a1.real() + c.a2 + c.a3;
    TransitionRates<Scalar> r;
    r.q = c.q;
    r.t1 = (1 + q2 * s / (q4 - 1)) / (q2 + 1);
    r.tplus = (q2 - 1) / (q2 + 1) * (1 + (c.a1.real() * q2 - c.a2 - c.a3) / (q4 - 1));
    r.tminus = r.tplus / (q2 - 1);
    r.tx = 1 - r.t1 - r.tplus;
    r.t11 = 1 - 2 * r.tminus;
    for (Scalar *v : {&r.t1, &r.tx, &r.tplus, &r.tminus, &r.t11}) {
        if (*v < -Scalar(kValidityTol) || *v > 1 + Scalar(kValidityTol))
            throw EnsembleValidityError("transition_rates: rate outside [0, 1]; coefficients outside the allowed region");
        *v = std::min(Scalar(1), std::max(Scalar(0), *v));
    }
    return r;
}

/// Probability of (in_left, in_right) -> (out_left, out_right).
template <typename Scalar>
Scalar pair_rate(const TransitionRates<Scalar> &r, int in_left, int in_right, int out_left, int out_right) {
    const bool out_ii = out_left == kI && out_right == kI;
    if (in_left == kI && in_right == kI) return out_ii ? Scalar(1) : Scalar(0);
    if (out_ii) return 0;
    if (in_left != in_right) {
        if (out_left == in_left && out_right == in_right) return r.t1;
        if (out_left == in_right && out_right == in_left) return r.tx;
        return r.tplus;
    }
    return (out_left == kX && out_right == kX) ? r.t11 : r.tminus;
}

/// 4x4 table T(out, in) over pair codes.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> rate_table(const TransitionRates<Scalar> &r) {
    Eigen::Matrix<Scalar, 4, 4> t;
    for (int in = 0; in < 4; ++in)
        for (int out = 0; out < 4; ++out) t(out, in) = pair_rate(r, in >> 1, in & 1, out >> 1, out & 1);
    return t;
}

/// Bit-packed periodic chain of binary sites.
struct BinaryChainState {
    int L = 0;
    std::vector<std::uint64_t> words;
    long t = 0;
    bool periodic = true;

    BinaryChainState() = default;
    explicit BinaryChainState(int sites);

    int get(int x) const { return static_cast<int>((words[x >> 6] >> (x & 63)) & 1u); }
    void set(int x, int v) {
        const std::uint64_t bit = std::uint64_t{1} << (x & 63);
        words[x >> 6] = v ? (words[x >> 6] | bit) : (words[x >> 6] & ~bit);
    }
    int count() const;
};

/// Samples an output pair code for input code `in` from a uniform draw.
int sample_pair(const Eigen::Matrix<double, 4, 4> &cumulative, int in, double u);

/// Column-wise cumulative sums of rate_table, used by sample_pair.
Eigen::Matrix<double, 4, 4> cumulative_table(const TransitionRates<double> &r);

/// One brickwork layer for time state.t + 1: left sites even when that time is even, odd otherwise.
void step_layer(BinaryChainState &state, const TransitionRates<double> &rates, std::mt19937_64 &rng);

/// Exact evolution of a distribution over 2^L binary strings (bit x = site x), periodic.
std::vector<VectorXd> evolve_binary_chain(const TransitionRates<double> &rates, int L, const VectorXd &initial,
                                          int t_max, long t_start = 0);

/// Per-time statistics of the rightmost non-identity site.
struct FrontTrace {
    std::vector<double> mean, mean_se, var, var_se;
    std::size_t n_real = 0;     // realizations used
    std::size_t n_wrapped = 0;  // realizations discarded after the fronts met around the ring
    std::uint64_t seed = 0;
    int L = 0;
    TransitionRates<double> rates;

    int t_max() const { return static_cast<int>(mean.size()) - 1; }
};

/// Monte Carlo of the binary process from a single X at site 0.
FrontTrace simulate_front(const TransitionRates<double> &rates, int L, int t_max, std::size_t n_real,
                          std::uint64_t seed, unsigned threads = 0);

struct DriftDiffusionFit {
    double v_b = 0;
    double d = 0;
    double v_se = 0;
    double d_se = 0;
    int points = 0;
};

/// Least-squares slopes of mean and variance over t >= t_min_fit.
DriftDiffusionFit fit_drift_diffusion(const FrontTrace &trace, int t_min_fit);

}  // namespace opspread
